#include "riskpde/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "riskpde/errors.hpp"

namespace riskpde {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary); // binary keeps \n on every platform
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_field_csv(const std::filesystem::path& path, const SpaceTimeField& f,
                     const SpatialMesh& mesh) {
  std::vector<std::string> header;
  header.reserve(mesh.n_interior);
  for (std::size_t i = 0; i < mesh.n_interior; ++i)
    header.push_back("x_" + format_double(mesh.node(i)));
  std::vector<std::vector<std::string>> rows;
  rows.reserve(f.n_steps());
  for (std::size_t m = 1; m <= f.n_steps(); ++m) {
    std::vector<std::string> row;
    row.reserve(mesh.n_interior);
    for (std::size_t i = 0; i < mesh.n_interior; ++i) row.push_back(format_double(f.at(m, i)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

std::vector<std::vector<double>> read_table_csv(const std::filesystem::path& path,
                                                std::size_t n_rows, std::size_t n_cols) {
  std::ifstream in(path);
  if (!in) throw ConfigError("table: cannot open " + path.string());
  std::vector<std::vector<double>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw ConfigError("table: non-numeric cell '" + cell + "' in " + path.string());
      }
    }
    if (row.size() != n_cols)
      throw ConfigError("table: expected " + std::to_string(n_cols) + " columns, got " +
                        std::to_string(row.size()) + " in " + path.string());
    table.push_back(std::move(row));
  }
  if (table.size() != n_rows)
    throw ConfigError("table: expected " + std::to_string(n_rows) + " rows, got " +
                      std::to_string(table.size()) + " in " + path.string());
  return table;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void ensure_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error("cannot create output directory: " + dir.string());
}

} // namespace riskpde

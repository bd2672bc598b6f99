#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"

#include <json.hpp>

namespace riskpde {

/// General-format decimal with 17 significant digits (trailing zeros
/// trimmed), locale-independent (std::to_chars), so every double
/// round-trips. All file output goes through this and byte-level
/// comparisons of runs are meaningful.
std::string format_double(double v);

/// One CSV row per time step m = 1..n_steps, one column per interior node,
/// header row naming the x coordinates. Exactly n_steps x n_interior values.
void write_field_csv(const std::filesystem::path& path, const SpaceTimeField& f,
                     const SpatialMesh& mesh);

/// Generic CSV writer; every cell already formatted.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Headerless numeric table, exactly n_rows x n_cols. Used for nodal target
/// tables. Throws ConfigError on shape or parse problems, naming the file.
std::vector<std::vector<double>> read_table_csv(const std::filesystem::path& path,
                                                std::size_t n_rows, std::size_t n_cols);

/// Pretty-printed with a trailing newline; key order preserved.
void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j);

/// Creates the directory (parents included) or throws std::runtime_error;
/// an existing directory is fine.
void ensure_output_dir(const std::filesystem::path& dir);

} // namespace riskpde

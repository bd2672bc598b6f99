#include "riskpde/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "riskpde/errors.hpp"
#include "riskpde/io.hpp"

namespace riskpde {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

const json& require_object(const json& j, const std::string& key) {
  if (!j.contains(key)) fail("missing section '" + key + "'");
  const json& s = j.at(key);
  if (!s.is_object()) fail("'" + key + "' must be an object");
  return s;
}

void reject_unknown(const json& j, const std::string& prefix, const std::set<std::string>& known) {
  for (const auto& item : j.items())
    if (!known.count(item.key())) fail("unknown key '" + prefix + item.key() + "'");
}

double get_number(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail("missing key '" + path + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) fail("'" + path + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail("'" + path + key + "' must be finite");
  return d;
}

std::size_t get_count(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail("missing key '" + path + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.is_number_float() || v.get<long long>() < 0)
    fail("'" + path + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail("'" + path + key + "' must be a boolean");
  return v.get<bool>();
}

} // namespace

RunConfig parse_config_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) fail("top level must be an object");
  reject_unknown(j, "", {"mesh", "time", "field", "grid", "problem", "solver", "output",
                         "perturb_adjoint"});

  RunConfig cfg;

  const json& mesh = require_object(j, "mesh");
  reject_unknown(mesh, "mesh.", {"n_elements", "length"});
  cfg.mesh_n_elements = get_count(mesh, "mesh.", "n_elements");
  cfg.mesh_length = get_number(mesh, "mesh.", "length");
  if (cfg.mesh_n_elements < 2) fail("mesh.n_elements must be at least 2");
  if (!(cfg.mesh_length > 0.0)) fail("mesh.length must be > 0");

  const json& time = require_object(j, "time");
  reject_unknown(time, "time.", {"T", "n_t"});
  cfg.horizon = get_number(time, "time.", "T");
  cfg.n_steps = get_count(time, "time.", "n_t");
  if (!(cfg.horizon > 0.0)) fail("time.T must be > 0");
  if (cfg.n_steps < 1) fail("time.n_t must be at least 1");

  const json& field = require_object(j, "field");
  reject_unknown(field, "field.", {"a0", "sigmas"});
  cfg.a0 = get_number(field, "field.", "a0");
  if (!field.contains("sigmas")) fail("missing key 'field.sigmas'");
  if (!field.at("sigmas").is_array()) fail("'field.sigmas' must be an array");
  for (const json& s : field.at("sigmas")) {
    if (!s.is_number() || !std::isfinite(s.get<double>()))
      fail("'field.sigmas' entries must be finite numbers");
    cfg.sigmas.push_back(s.get<double>());
  }
  double sigma_sum = 0.0;
  for (double s : cfg.sigmas) sigma_sum += std::abs(s);
  if (!(cfg.a0 - sigma_sum > 0.0))
    fail("field.a0 - sum |sigmas| must be > 0 (uniform positivity)");

  const json& grid = require_object(j, "grid");
  reject_unknown(grid, "grid.", {"points_per_dim"});
  cfg.points_per_dim = get_count(grid, "grid.", "points_per_dim");
  if (cfg.points_per_dim < 1) fail("grid.points_per_dim must be at least 1");

  const json& problem = require_object(j, "problem");
  reject_unknown(problem, "problem.", {"alpha", "beta", "constrained", "target"});
  cfg.alpha = get_number(problem, "problem.", "alpha");
  cfg.beta = get_number(problem, "problem.", "beta");
  if (!(cfg.alpha >= 0.0)) fail("problem.alpha must be >= 0");
  if (!(cfg.beta > 0.0)) fail("problem.beta must be > 0");
  cfg.constrained = get_bool(problem, "problem.", "constrained", false);

  const json& target = require_object(problem, "target");
  if (!target.contains("kind") || !target.at("kind").is_string())
    fail("'problem.target.kind' must be a string");
  const std::string kind = target.at("kind").get<std::string>();
  if (kind == "constant") {
    reject_unknown(target, "problem.target.", {"kind", "value"});
    cfg.target.kind = TargetKind::Constant;
    cfg.target.value = get_number(target, "problem.target.", "value");
  } else if (kind == "separable_sine_ramp") {
    reject_unknown(target, "problem.target.", {"kind", "amplitude"});
    cfg.target.kind = TargetKind::SeparableSineRamp;
    cfg.target.amplitude = get_number(target, "problem.target.", "amplitude");
  } else if (kind == "nodal_table") {
    reject_unknown(target, "problem.target.", {"kind", "table_path"});
    cfg.target.kind = TargetKind::NodalTable;
    if (!target.contains("table_path") || !target.at("table_path").is_string())
      fail("'problem.target.table_path' must be a string");
    std::filesystem::path p = target.at("table_path").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    cfg.target.table_path = std::filesystem::weakly_canonical(p).string();
  } else {
    fail("'problem.target.kind' must be one of constant, separable_sine_ramp, nodal_table");
  }

  if (j.contains("solver")) {
    const json& solver = require_object(j, "solver");
    reject_unknown(solver, "solver.", {"max_iters", "tol_grad", "armijo_c", "backtrack_factor",
                                       "initial_step", "seed"});
    if (solver.contains("max_iters")) cfg.max_iters = get_count(solver, "solver.", "max_iters");
    if (solver.contains("tol_grad")) cfg.tol_grad = get_number(solver, "solver.", "tol_grad");
    if (solver.contains("armijo_c")) cfg.armijo_c = get_number(solver, "solver.", "armijo_c");
    if (solver.contains("backtrack_factor"))
      cfg.backtrack_factor = get_number(solver, "solver.", "backtrack_factor");
    if (solver.contains("initial_step")) {
      cfg.initial_step = get_number(solver, "solver.", "initial_step");
      if (!(cfg.initial_step > 0.0)) fail("solver.initial_step must be > 0");
    }
    if (solver.contains("seed")) {
      const json& v = solver.at("seed");
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        fail("'solver.seed' must be a nonnegative integer");
      cfg.seed = v.get<std::uint64_t>();
    }
  }
  if (cfg.max_iters < 1) fail("solver.max_iters must be at least 1");
  if (!(cfg.tol_grad > 0.0)) fail("solver.tol_grad must be > 0");
  if (!(cfg.armijo_c > 0.0 && cfg.armijo_c < 1.0)) fail("solver.armijo_c must lie in (0,1)");
  if (!(cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0))
    fail("solver.backtrack_factor must lie in (0,1)");
  if (cfg.initial_step == 0.0) cfg.initial_step = 1.0 / cfg.beta;
  if (!(cfg.initial_step > 0.0)) fail("solver.initial_step must be > 0");

  if (j.contains("output")) {
    const json& output = require_object(j, "output");
    reject_unknown(output, "output.", {"dir"});
    if (output.contains("dir")) {
      if (!output.at("dir").is_string()) fail("'output.dir' must be a string");
      cfg.output_dir = output.at("dir").get<std::string>();
      if (cfg.output_dir.empty()) fail("'output.dir' must not be empty");
    }
  }

  cfg.perturb_adjoint = get_bool(j, "", "perturb_adjoint", false);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_config_json(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::ordered_json canonical_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["mesh"] = {{"n_elements", cfg.mesh_n_elements}, {"length", cfg.mesh_length}};
  j["time"] = {{"T", cfg.horizon}, {"n_t", cfg.n_steps}};
  j["field"] = {{"a0", cfg.a0}, {"sigmas", cfg.sigmas}};
  j["grid"] = {{"points_per_dim", cfg.points_per_dim}};
  nlohmann::ordered_json target;
  switch (cfg.target.kind) {
    case TargetKind::Constant:
      target = {{"kind", "constant"}, {"value", cfg.target.value}};
      break;
    case TargetKind::SeparableSineRamp:
      target = {{"kind", "separable_sine_ramp"}, {"amplitude", cfg.target.amplitude}};
      break;
    case TargetKind::NodalTable:
      target = {{"kind", "nodal_table"}, {"table_path", cfg.target.table_path}};
      break;
  }
  j["problem"] = {{"alpha", cfg.alpha},
                  {"beta", cfg.beta},
                  {"constrained", cfg.constrained},
                  {"target", target}};
  j["solver"] = {{"max_iters", cfg.max_iters},
                 {"tol_grad", cfg.tol_grad},
                 {"armijo_c", cfg.armijo_c},
                 {"backtrack_factor", cfg.backtrack_factor},
                 {"initial_step", cfg.initial_step},
                 {"seed", cfg.seed}};
  j["output"] = {{"dir", cfg.output_dir}};
  j["perturb_adjoint"] = cfg.perturb_adjoint;
  return j;
}

ProblemSetup build_setup(const RunConfig& cfg) {
  ProblemSetup s{build_mesh(cfg.mesh_n_elements, cfg.mesh_length),
                 build_field_model(cfg.a0, cfg.sigmas),
                 build_collocation_grid(cfg.sigmas.size(), cfg.points_per_dim),
                 ProblemSpec{},
                 SolverOptions{}};
  s.spec.horizon = cfg.horizon;
  s.spec.n_steps = cfg.n_steps;
  s.spec.alpha = cfg.alpha;
  s.spec.beta = cfg.beta;
  s.spec.constrained = cfg.constrained;
  switch (cfg.target.kind) {
    case TargetKind::Constant:
      s.spec.target = ConstantTarget{cfg.target.value};
      break;
    case TargetKind::SeparableSineRamp:
      s.spec.target = SeparableSineRampTarget{cfg.target.amplitude};
      break;
    case TargetKind::NodalTable: {
      const auto rows =
          read_table_csv(cfg.target.table_path, cfg.n_steps, s.mesh.n_interior);
      NodalTableTarget t{SpaceTimeField(cfg.n_steps, s.mesh.n_interior)};
      for (std::size_t m = 1; m <= cfg.n_steps; ++m) {
        auto slice = t.values.slice(m);
        for (std::size_t i = 0; i < s.mesh.n_interior; ++i) slice[i] = rows[m - 1][i];
      }
      s.spec.target = std::move(t);
      break;
    }
  }
  s.spec.validate();
  s.solver.max_iters = cfg.max_iters;
  s.solver.tol_grad = cfg.tol_grad;
  s.solver.armijo_c = cfg.armijo_c;
  s.solver.backtrack_factor = cfg.backtrack_factor;
  s.solver.initial_step = cfg.initial_step;
  s.solver.validate();
  return s;
}

} // namespace riskpde

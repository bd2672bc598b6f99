#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskpde/mesh.hpp"
#include "riskpde/optimizer.hpp"
#include "riskpde/problem.hpp"
#include "riskpde/stochastic.hpp"

#include <json.hpp>

namespace riskpde {

enum class TargetKind { Constant, SeparableSineRamp, NodalTable };

struct TargetConfig {
  TargetKind kind = TargetKind::Constant;
  double value = 0.0;      // constant
  double amplitude = 0.0;  // separable_sine_ramp
  std::string table_path;  // nodal_table, absolute after parsing
};

/// Fully resolved run description. parse_config fills every optional with
/// its default, so two configs describing the same run compare equal.
struct RunConfig {
  std::size_t mesh_n_elements = 0;
  double mesh_length = 0.0;

  double horizon = 0.0;
  std::size_t n_steps = 0;

  double a0 = 0.0;
  std::vector<double> sigmas;

  std::size_t points_per_dim = 0;

  double alpha = 0.0;
  double beta = 0.0;
  bool constrained = false;
  TargetConfig target;

  std::size_t max_iters = 500;
  double tol_grad = 1e-8;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 0.0; // resolved: defaults to 1/beta
  std::uint64_t seed = 42;

  std::string output_dir = "out";

  /// Test hook: scales the adjoint by 1 + 1e-3 inside gradient checks so a
  /// deliberately broken gradient is seen to fail.
  bool perturb_adjoint = false;
};

/// Reads and validates a JSON config file. Unknown keys, missing keys,
/// wrong types, and out-of-range values all throw ConfigError with the
/// offending dotted key in the message. Relative nodal-table paths resolve
/// against the config file's directory.
RunConfig parse_config(const std::string& path);

/// Same validation applied to an in-memory document; base_dir anchors
/// relative table paths.
RunConfig parse_config_json(const nlohmann::json& j, const std::string& base_dir);

/// Canonical echo of a parsed config: every field explicit, fixed key
/// order. parse_config_json(canonical_json(c)) round-trips to the same
/// canonical form.
nlohmann::ordered_json canonical_json(const RunConfig& cfg);

struct ProblemSetup {
  SpatialMesh mesh;
  RandomFieldModel model;
  CollocationGrid grid;
  ProblemSpec spec;
  SolverOptions solver;
};

/// Instantiates the validated config: mesh, field model, collocation grid,
/// problem description (loading a nodal table from disk if declared), solver
/// options.
ProblemSetup build_setup(const RunConfig& cfg);

} // namespace riskpde

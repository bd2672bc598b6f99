#pragma once

#include <cstddef>
#include <variant>

#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"

namespace riskpde {

struct ConstantTarget {
  double value = 0.0;
};

/// y_d(t, x) = amplitude * sin(pi x / length) * t / horizon.
struct SeparableSineRampTarget {
  double amplitude = 1.0;
};

/// Tabulated nodal values for time steps m = 1..n_steps on the interior
/// nodes; the t = 0 slice is kept zero and never read by the scheme.
struct NodalTableTarget {
  SpaceTimeField values;
};

using TargetSpec = std::variant<ConstantTarget, SeparableSineRampTarget, NodalTableTarget>;

/// Scalar data of the control problem. beta > 0 keeps the reduced objective
/// strongly convex; alpha >= 0 weighs the state-variance penalty;
/// constrained selects the cone {u >= 0} as the admissible set.
struct ProblemSpec {
  double horizon = 1.0;
  std::size_t n_steps = 1;
  double alpha = 0.0;
  double beta = 1.0;
  TargetSpec target = ConstantTarget{};
  bool constrained = false;

  double dt() const { return horizon / static_cast<double>(n_steps); }

  /// Throws std::invalid_argument on any out-of-range entry.
  void validate() const;
};

/// Target values on the full slice lattice m = 0..n_steps. A nodal table
/// must match the mesh and step count it was declared for.
SpaceTimeField evaluate_target(const ProblemSpec& spec, const SpatialMesh& mesh);

} // namespace riskpde

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"
#include "riskpde/objective.hpp"
#include "riskpde/problem.hpp"
#include "riskpde/stochastic.hpp"

namespace riskpde {

struct SolverOptions {
  std::size_t max_iters = 500;
  double tol_grad = 1e-8;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  /// Step to open each line search with; defaults to 1/beta when unset.
  std::optional<double> initial_step;

  void validate() const;
};

struct SolveReport {
  std::size_t iterations = 0; // gradient evaluations performed
  bool converged = false;
  std::vector<double> objective_history;          // one entry per iterate
  std::vector<ObjectiveBreakdown> breakdown_history;
  std::vector<double> projected_grad_norms;       // natural residual per iterate
  std::vector<double> step_history;               // accepted step leaving each iterate
  double complementarity_residual = 0.0;          // max-norm, at the final iterate
  double wall_time = 0.0;                         // seconds; excluded from file reports
};

struct SolveResult {
  SpaceTimeStochField control;
  SolveReport report;
};

/// Pointwise projection onto the cone {u >= 0}.
SpaceTimeStochField project_admissible(SpaceTimeStochField u);

/// max over the lattice of |min(u, beta u + lambda-like g entries)| given
/// g = beta u + lambda; zero exactly where the first-order conditions hold
/// on the cone.
double complementarity_residual(const SpaceTimeStochField& u, const SpaceTimeStochField& g,
                                const ProblemSpec& spec);

/// Projected gradient descent with Armijo backtracking.
///
/// Each iteration evaluates the exact gradient g = beta u + lambda through
/// one adjoint sweep, records the natural residual ||u - P(u - g)||_U
/// (plain ||g||_U when unconstrained), and stops once it falls to
/// opts.tol_grad. The line search accepts u+ = P(u - tau g) when
/// J(u+) <= J(u) - armijo_c <g, u - u+>, halving tau at most 60 times
/// before giving up with StepFailure. Slice 0 of the iterate is pinned to
/// zero at entry; the dynamics never read it.
SolveResult solve(const ProblemSpec& spec, const SpatialMesh& mesh, const RandomFieldModel& model,
                  const CollocationGrid& grid, const SpaceTimeStochField& initial_control,
                  const SolverOptions& opts);

/// Control-shaped field with uniform [-1, 1) entries from the given seed.
SpaceTimeStochField random_control(std::size_t n_nodes, std::size_t n_steps, std::size_t n_space,
                                   std::uint64_t seed);

/// Distance ||u*_zero - u*_seeded||_U between solves started from zero and
/// from a projected seeded random control. Small output certifies that the
/// strongly convex problem has one minimizer and the solver finds it.
double uniqueness_check(const ProblemSpec& spec, const SpatialMesh& mesh,
                        const RandomFieldModel& model, const CollocationGrid& grid,
                        const SolverOptions& opts, std::uint64_t seed);

} // namespace riskpde

#pragma once

#include <cstddef>
#include <cstdint>

#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"
#include "riskpde/problem.hpp"
#include "riskpde/stochastic.hpp"

namespace riskpde {

/// Central finite difference (J(u + h w) - J(u - h w)) / (2h). The reduced
/// objective is a quadratic in u, so this is exact up to roundoff and any
/// disagreement with the adjoint gradient beyond ~1e-10 relative is a bug
/// in the adjoint, not truncation error.
double fd_directional(const ProblemSpec& spec, const SpatialMesh& mesh, const RandomFieldModel& model,
                      const CollocationGrid& grid, const SpaceTimeStochField& u,
                      const SpaceTimeStochField& w, double h_fd);

struct KktSolution {
  SpaceTimeStochField state;
  SpaceTimeStochField control;
  SpaceTimeStochField adjoint;
};

/// Assembles the full unconstrained optimality system -- the forward
/// recurrence, the adjoint recurrence, and the stationarity identity
/// beta u + lambda = 0 -- as one dense linear system in (y, u, lambda) and
/// solves it by LU. Independent of the iterative path: no forward_solve,
/// no adjoint_solve, no tridiagonal factorization. Desk scale only; throws
/// DimensionGuard when 3 * Q * n_steps * n_interior exceeds 6000, and
/// std::invalid_argument for constrained problems.
KktSolution kkt_solve(const ProblemSpec& spec, const SpatialMesh& mesh, const RandomFieldModel& model,
                      const CollocationGrid& grid);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0; // standard error of the estimate
};

/// Monte Carlo estimate of J at a node-independent control (a field with a
/// single node block), sampling the parameter box uniformly with one
/// SplitMix64 stream per sample, streams derived from (seed, sample index).
/// With zero modes every sample coincides and the estimate reproduces the
/// collocation quadrature value exactly. Requires n_samples >= 100.
McEstimate mc_objective(const ProblemSpec& spec, const SpatialMesh& mesh, const RandomFieldModel& model,
                        const SpaceTimeStochField& control, std::size_t n_samples, std::uint64_t seed);

} // namespace riskpde

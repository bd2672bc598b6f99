#pragma once

#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"
#include "riskpde/problem.hpp"
#include "riskpde/stochastic.hpp"

namespace riskpde {

/// Implicit-Euler state solve, one independent sweep per collocation node q:
///
///   y_q^0 = 0,   (M + dt K_q) y_q^m = M y_q^{m-1} + dt M u_q^m,   m = 1..n_steps,
///
/// where K_q is the stiffness matrix for the coefficient realization at
/// node q. Sweeps run under parallel_for and write disjoint slices.
SpaceTimeStochField forward_solve(const ProblemSpec& spec, const SpatialMesh& mesh,
                                  const RandomFieldModel& model, const CollocationGrid& grid,
                                  const SpaceTimeStochField& control);

/// Backward implicit-Euler adjoint sweep, the exact transpose of
/// forward_solve in the discrete inner products:
///
///   lambda_q^{n_steps+1} = 0,
///   (M + dt K_q) lambda_q^m = M lambda_q^{m+1}
///       + dt M [ (1+alpha) y_q^m - alpha ybar^m - y_d^m ],   m = n_steps..1,
///
/// with ybar the weighted mean of the state over nodes. The realizations
/// couple only through ybar; slice 0 of the result stays zero.
SpaceTimeStochField adjoint_solve(const ProblemSpec& spec, const SpatialMesh& mesh,
                                  const RandomFieldModel& model, const CollocationGrid& grid,
                                  const SpaceTimeStochField& state);

} // namespace riskpde

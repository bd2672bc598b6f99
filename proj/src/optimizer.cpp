#include "riskpde/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "riskpde/dynamics.hpp"
#include "riskpde/errors.hpp"
#include "riskpde/rng.hpp"

namespace riskpde {

namespace {
constexpr int kMaxBacktracks = 60;
} // namespace

void SolverOptions::validate() const {
  if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be at least 1");
  if (!(tol_grad > 0.0)) throw std::invalid_argument("solver: tol_grad must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw std::invalid_argument("solver: armijo_c must lie in (0,1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw std::invalid_argument("solver: backtrack_factor must lie in (0,1)");
  if (initial_step && !(*initial_step > 0.0))
    throw std::invalid_argument("solver: initial_step must be positive");
}

SpaceTimeStochField project_admissible(SpaceTimeStochField u) {
  for (double& v : u.values())
    if (v < 0.0) v = 0.0;
  return u;
}

double complementarity_residual(const SpaceTimeStochField& u, const SpaceTimeStochField& g,
                                const ProblemSpec& spec) {
  (void)spec;
  require_same_shape(u, g, "complementarity");
  double r = 0.0;
  auto uv = u.values();
  auto gv = g.values();
  for (std::size_t k = 0; k < uv.size(); ++k)
    r = std::max(r, std::abs(std::min(uv[k], gv[k])));
  return r;
}

SolveResult solve(const ProblemSpec& spec, const SpatialMesh& mesh, const RandomFieldModel& model,
                  const CollocationGrid& grid, const SpaceTimeStochField& initial_control,
                  const SolverOptions& opts) {
  spec.validate();
  opts.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SpaceTimeStochField u = initial_control;
  zero_time_slice(u, 0); // dynamics and inner products never read slice 0
  if (spec.constrained) u = project_admissible(std::move(u));

  const double step0 = opts.initial_step.value_or(1.0 / spec.beta);

  SpaceTimeStochField y = forward_solve(spec, mesh, model, grid, u);
  ObjectiveBreakdown breakdown = objective_from_state(spec, mesh, grid, y, u);

  SolveResult result;
  SolveReport& rep = result.report;

  for (std::size_t it = 1; it <= opts.max_iters; ++it) {
    const SpaceTimeStochField lambda = adjoint_solve(spec, mesh, model, grid, y);
    const SpaceTimeStochField g = gradient_from_adjoint(u, lambda, spec);

    double residual;
    if (spec.constrained) {
      const SpaceTimeStochField moved = project_admissible(lin_comb(1.0, u, -1.0, g));
      residual = norm_U(lin_comb(1.0, u, -1.0, moved), spec, mesh, grid);
    } else {
      residual = norm_U(g, spec, mesh, grid);
    }

    rep.iterations = it;
    rep.objective_history.push_back(breakdown.total);
    rep.breakdown_history.push_back(breakdown);
    rep.projected_grad_norms.push_back(residual);

    if (residual <= opts.tol_grad) {
      rep.converged = true;
      rep.complementarity_residual =
          spec.constrained ? complementarity_residual(u, g, spec) : max_abs(g);
      break;
    }
    if (it == opts.max_iters) {
      // budget exhausted; report the residual of the last evaluated iterate
      rep.complementarity_residual =
          spec.constrained ? complementarity_residual(u, g, spec) : max_abs(g);
      break;
    }

    double tau = step0;
    bool accepted = false;
    for (int cut = 0; cut <= kMaxBacktracks; ++cut) {
      SpaceTimeStochField u_next = lin_comb(1.0, u, -tau, g);
      if (spec.constrained) u_next = project_admissible(std::move(u_next));
      SpaceTimeStochField y_next = forward_solve(spec, mesh, model, grid, u_next);
      const ObjectiveBreakdown b_next = objective_from_state(spec, mesh, grid, y_next, u_next);
      const double decrease =
          inner_product_U(g, lin_comb(1.0, u, -1.0, u_next), spec, mesh, grid);
      if (b_next.total <= breakdown.total - opts.armijo_c * decrease) {
        u = std::move(u_next);
        y = std::move(y_next);
        breakdown = b_next;
        rep.step_history.push_back(tau);
        accepted = true;
        break;
      }
      tau *= opts.backtrack_factor;
    }
    if (!accepted)
      throw StepFailure("line search: no acceptable step after " +
                        std::to_string(kMaxBacktracks) + " reductions");
  }

  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.control = std::move(u);
  return result;
}

SpaceTimeStochField random_control(std::size_t n_nodes, std::size_t n_steps, std::size_t n_space,
                                   std::uint64_t seed) {
  SpaceTimeStochField u(FieldRole::Control, n_nodes, n_steps, n_space);
  SplitMix64 gen(seed);
  for (double& v : u.values()) v = gen.uniform_sym();
  zero_time_slice(u, 0);
  return u;
}

double uniqueness_check(const ProblemSpec& spec, const SpatialMesh& mesh,
                        const RandomFieldModel& model, const CollocationGrid& grid,
                        const SolverOptions& opts, std::uint64_t seed) {
  const SpaceTimeStochField zero(FieldRole::Control, grid.size(), spec.n_steps, mesh.n_interior);
  const SolveResult from_zero = solve(spec, mesh, model, grid, zero, opts);

  SpaceTimeStochField start = random_control(grid.size(), spec.n_steps, mesh.n_interior, seed);
  if (spec.constrained) start = project_admissible(std::move(start));
  const SolveResult from_random = solve(spec, mesh, model, grid, start, opts);

  return norm_U(lin_comb(1.0, from_zero.control, -1.0, from_random.control), spec, mesh, grid);
}

} // namespace riskpde

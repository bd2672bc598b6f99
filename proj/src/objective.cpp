#include "riskpde/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "riskpde/dynamics.hpp"
#include "riskpde/tridiag.hpp"

namespace riskpde {

namespace {

void check_field(const SpaceTimeStochField& f, const ProblemSpec& spec, const SpatialMesh& mesh,
                 const CollocationGrid& grid, const char* what) {
  if (f.n_nodes() != grid.size() || f.n_steps() != spec.n_steps || f.n_space() != mesh.n_interior)
    throw std::invalid_argument(std::string(what) + ": field shape does not match discretization");
}

} // namespace

double inner_product_U(const SpaceTimeStochField& f, const SpaceTimeStochField& g,
                       const ProblemSpec& spec, const SpatialMesh& mesh,
                       const CollocationGrid& grid) {
  require_same_shape(f, g, "inner_product_U");
  check_field(f, spec, mesh, grid, "inner_product_U");
  const SymTridiag mass = assemble_mass(mesh);
  const double dt = spec.dt();
  double acc = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    double node_acc = 0.0;
    for (std::size_t m = 1; m <= spec.n_steps; ++m)
      node_acc += bilinear(mass, f.slice(q, m), g.slice(q, m));
    acc += grid.weight(q) * dt * node_acc;
  }
  return acc;
}

double norm_U(const SpaceTimeStochField& f, const ProblemSpec& spec, const SpatialMesh& mesh,
              const CollocationGrid& grid) {
  // the integrand is a quadratic form of an SPD matrix, nonnegative up to roundoff
  return std::sqrt(std::max(0.0, inner_product_U(f, f, spec, mesh, grid)));
}

ObjectiveBreakdown objective_from_state(const ProblemSpec& spec, const SpatialMesh& mesh,
                                        const CollocationGrid& grid,
                                        const SpaceTimeStochField& state,
                                        const SpaceTimeStochField& control) {
  spec.validate();
  check_field(state, spec, mesh, grid, "objective");
  check_field(control, spec, mesh, grid, "objective");

  const SymTridiag mass = assemble_mass(mesh);
  const double dt = spec.dt();
  const SpaceTimeField target = evaluate_target(spec, mesh);
  const SpaceTimeField mean_state = expectation(state, grid);

  double acc_track = 0.0;    // sum_q w_q sum_m (y - d)' M (y - d)
  double acc_centered = 0.0; // sum_q w_q sum_m (y - ybar)' M (y - ybar)
  double acc_sq = 0.0;       // sum_q w_q sum_m y' M y
  double acc_ctrl = 0.0;     // sum_q w_q sum_m u' M u
  for (std::size_t q = 0; q < grid.size(); ++q) {
    double t = 0.0, c = 0.0, s = 0.0, u2 = 0.0;
    for (std::size_t m = 1; m <= spec.n_steps; ++m) {
      t += quad_form_diff(mass, state.slice(q, m), target.slice(m));
      c += quad_form_diff(mass, state.slice(q, m), mean_state.slice(m));
      s += quad_form(mass, state.slice(q, m));
      u2 += quad_form(mass, control.slice(q, m));
    }
    const double w = grid.weight(q);
    acc_track += w * t;
    acc_centered += w * c;
    acc_sq += w * s;
    acc_ctrl += w * u2;
  }

  double mean_sq = 0.0; // sum_m ybar' M ybar
  for (std::size_t m = 1; m <= spec.n_steps; ++m)
    mean_sq += quad_form(mass, mean_state.slice(m));

  // dual-route variance: centered sum vs E(y^2) - (E y)^2
  const double var_centered = dt * acc_centered;
  const double var_uncentered = dt * (acc_sq - mean_sq);
  const double scale = std::max({std::abs(var_centered), std::abs(var_uncentered), dt * acc_sq});
  if (std::abs(var_centered - var_uncentered) > 1e-12 * std::max(scale, 1e-300))
    throw std::runtime_error("objective: variance routes disagree beyond roundoff");

  ObjectiveBreakdown b;
  b.tracking = 0.5 * dt * acc_track;
  b.variance_raw = 0.5 * spec.alpha * var_centered;
  b.control = 0.5 * spec.beta * dt * acc_ctrl;
  b.tracking = std::max(0.0, b.tracking);
  b.variance_raw = std::max(0.0, b.variance_raw);
  b.control = std::max(0.0, b.control);
  b.total = b.tracking + b.variance_raw + b.control;
  return b;
}

ObjectiveBreakdown evaluate_objective(const ProblemSpec& spec, const SpatialMesh& mesh,
                                      const RandomFieldModel& model, const CollocationGrid& grid,
                                      const SpaceTimeStochField& control) {
  const SpaceTimeStochField state = forward_solve(spec, mesh, model, grid, control);
  return objective_from_state(spec, mesh, grid, state, control);
}

SpaceTimeStochField gradient_from_adjoint(const SpaceTimeStochField& control,
                                          const SpaceTimeStochField& adjoint,
                                          const ProblemSpec& spec) {
  require_same_shape(control, adjoint, "gradient");
  SpaceTimeStochField g(FieldRole::Control, control.n_nodes(), control.n_steps(),
                        control.n_space());
  auto go = g.values();
  auto u = control.values();
  auto l = adjoint.values();
  for (std::size_t k = 0; k < go.size(); ++k) go[k] = spec.beta * u[k] + l[k];
  return g;
}

DirectionalTerms directional_derivative_terms(const ProblemSpec& spec, const SpatialMesh& mesh,
                                              const RandomFieldModel& model,
                                              const CollocationGrid& grid,
                                              const SpaceTimeStochField& u,
                                              const SpaceTimeStochField& v) {
  const SpaceTimeStochField yu = forward_solve(spec, mesh, model, grid, u);
  const SpaceTimeStochField yv = forward_solve(spec, mesh, model, grid, v);
  const SpaceTimeStochField dy = lin_comb(1.0, yv, -1.0, yu);
  const SpaceTimeStochField du = lin_comb(1.0, v, -1.0, u);

  const std::size_t q_count = grid.size();
  const SpaceTimeStochField target_x =
      broadcast(evaluate_target(spec, mesh), q_count, FieldRole::TargetExpanded);
  const SpaceTimeStochField mean_x =
      broadcast(expectation(yu, grid), q_count, FieldRole::State);

  DirectionalTerms terms;
  terms.tracking = inner_product_U(lin_comb(1.0, yu, -1.0, target_x), dy, spec, mesh, grid);
  terms.second_moment = spec.alpha * inner_product_U(yu, dy, spec, mesh, grid);
  terms.mean_square = spec.alpha * inner_product_U(mean_x, dy, spec, mesh, grid);
  terms.control = spec.beta * inner_product_U(u, du, spec, mesh, grid);
  return terms;
}

} // namespace riskpde

#include "riskpde/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskpde/dynamics.hpp"
#include "riskpde/errors.hpp"
#include "riskpde/objective.hpp"
#include "riskpde/rng.hpp"
#include "riskpde/tridiag.hpp"

namespace riskpde {

double fd_directional(const ProblemSpec& spec, const SpatialMesh& mesh,
                      const RandomFieldModel& model, const CollocationGrid& grid,
                      const SpaceTimeStochField& u, const SpaceTimeStochField& w, double h_fd) {
  if (!(h_fd > 0.0)) throw std::invalid_argument("fd: step must be positive");
  require_same_shape(u, w, "fd");
  const double j_plus =
      evaluate_objective(spec, mesh, model, grid, lin_comb(1.0, u, h_fd, w)).total;
  const double j_minus =
      evaluate_objective(spec, mesh, model, grid, lin_comb(1.0, u, -h_fd, w)).total;
  return (j_plus - j_minus) / (2.0 * h_fd);
}

namespace {

constexpr std::size_t kKktDimensionCap = 6000;

// scatter the tridiagonal block c*T into rows [r0, r0+n) and columns
// [c0, c0+n) of a dense matrix
void add_tridiag_block(Eigen::MatrixXd& a, std::size_t r0, std::size_t c0, double c,
                       const SymTridiag& t) {
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    a(static_cast<Eigen::Index>(r0 + i), static_cast<Eigen::Index>(c0 + i)) += c * t.diag[i];
    if (i + 1 < n) {
      a(static_cast<Eigen::Index>(r0 + i), static_cast<Eigen::Index>(c0 + i + 1)) += c * t.off[i];
      a(static_cast<Eigen::Index>(r0 + i + 1), static_cast<Eigen::Index>(c0 + i)) += c * t.off[i];
    }
  }
}

} // namespace

KktSolution kkt_solve(const ProblemSpec& spec, const SpatialMesh& mesh,
                      const RandomFieldModel& model, const CollocationGrid& grid) {
  spec.validate();
  if (spec.constrained)
    throw std::invalid_argument("kkt: only the unconstrained optimality system is linear");
  if (grid.dim() != model.n_modes())
    throw std::invalid_argument("kkt: grid dimension does not match field model");

  const std::size_t q_count = grid.size();
  const std::size_t n_t = spec.n_steps;
  const std::size_t n = mesh.n_interior;
  const std::size_t block = q_count * n_t * n; // unknowns per field
  const std::size_t dim = 3 * block;
  if (dim > kKktDimensionCap)
    throw DimensionGuard("kkt: system dimension " + std::to_string(dim) + " exceeds cap " +
                         std::to_string(kKktDimensionCap));

  const double dt = spec.dt();
  const SymTridiag mass = assemble_mass(mesh);
  const SpaceTimeField target = evaluate_target(spec, mesh);

  // unknown layout: y block, then u block, then lambda block;
  // inside a block: node q slowest, then time step m = 1..n_t, then space
  const auto y_at = [&](std::size_t q, std::size_t m) { return (q * n_t + (m - 1)) * n; };
  const auto u_at = [&](std::size_t q, std::size_t m) { return block + (q * n_t + (m - 1)) * n; };
  const auto l_at = [&](std::size_t q, std::size_t m) {
    return 2 * block + (q * n_t + (m - 1)) * n;
  };

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));

  for (std::size_t q = 0; q < q_count; ++q) {
    const auto coeff = realize_coefficient(model, grid.node(q), mesh);
    const SymTridiag stepmat = add_scaled(mass, dt, assemble_stiffness(mesh, coeff));

    for (std::size_t m = 1; m <= n_t; ++m) {
      // forward rows: (M + dt K_q) y^m - M y^{m-1} - dt M u^m = 0
      add_tridiag_block(a, y_at(q, m), y_at(q, m), 1.0, stepmat);
      if (m > 1) add_tridiag_block(a, y_at(q, m), y_at(q, m - 1), -1.0, mass);
      add_tridiag_block(a, y_at(q, m), u_at(q, m), -dt, mass);

      // adjoint rows: (M + dt K_q) l^m - M l^{m+1}
      //               - dt M [(1+alpha) y_q^m - alpha ybar^m] = -dt M d^m
      add_tridiag_block(a, l_at(q, m), l_at(q, m), 1.0, stepmat);
      if (m < n_t) add_tridiag_block(a, l_at(q, m), l_at(q, m + 1), -1.0, mass);
      for (std::size_t p = 0; p < q_count; ++p) {
        const double c = (p == q ? 1.0 + spec.alpha : 0.0) - spec.alpha * grid.weight(p);
        if (c != 0.0) add_tridiag_block(a, l_at(q, m), y_at(p, m), -dt * c, mass);
      }
      std::vector<double> md(n);
      mass.apply(target.slice(m), md);
      for (std::size_t i = 0; i < n; ++i)
        b(static_cast<Eigen::Index>(l_at(q, m) + i)) = -dt * md[i];

      // stationarity rows: beta u^m + l^m = 0
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(u_at(q, m) + i);
        a(r, static_cast<Eigen::Index>(u_at(q, m) + i)) += spec.beta;
        a(r, static_cast<Eigen::Index>(l_at(q, m) + i)) += 1.0;
      }
    }
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd x = lu.solve(b);
  const double res = (a * x - b).lpNorm<Eigen::Infinity>();
  if (!(res <= 1e-8 * (b.lpNorm<Eigen::Infinity>() + 1.0)))
    throw std::runtime_error("kkt: dense solve residual too large, system near singular");

  KktSolution sol{SpaceTimeStochField(FieldRole::State, q_count, n_t, n),
                  SpaceTimeStochField(FieldRole::Control, q_count, n_t, n),
                  SpaceTimeStochField(FieldRole::Adjoint, q_count, n_t, n)};
  for (std::size_t q = 0; q < q_count; ++q)
    for (std::size_t m = 1; m <= n_t; ++m)
      for (std::size_t i = 0; i < n; ++i) {
        sol.state.at(q, m, i) = x(static_cast<Eigen::Index>(y_at(q, m) + i));
        sol.control.at(q, m, i) = x(static_cast<Eigen::Index>(u_at(q, m) + i));
        sol.adjoint.at(q, m, i) = x(static_cast<Eigen::Index>(l_at(q, m) + i));
      }
  return sol;
}

McEstimate mc_objective(const ProblemSpec& spec, const SpatialMesh& mesh,
                        const RandomFieldModel& model, const SpaceTimeStochField& control,
                        std::size_t n_samples, std::uint64_t seed) {
  spec.validate();
  if (control.n_nodes() != 1)
    throw std::invalid_argument("mc: control must be node-independent (single node block)");
  if (control.n_steps() != spec.n_steps || control.n_space() != mesh.n_interior)
    throw std::invalid_argument("mc: control shape does not match discretization");
  if (n_samples < 100) throw std::invalid_argument("mc: need at least 100 samples");

  const SymTridiag mass = assemble_mass(mesh);
  const double dt = spec.dt();
  const std::size_t n_modes = model.n_modes();
  const std::size_t n = mesh.n_interior;
  const SpaceTimeField target = evaluate_target(spec, mesh);

  // Welford accumulators: random integrand f = tracking + (alpha/2) |y|^2,
  // plus the pointwise state mean for the plug-in variance correction
  double mean_track = 0.0, mean_sq = 0.0, mean_f = 0.0, m2_f = 0.0;
  SpaceTimeField mean_state(spec.n_steps, n);

  for (std::size_t s = 0; s < n_samples; ++s) {
    SplitMix64 gen = SplitMix64::stream(seed, s);
    std::vector<double> xi(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) xi[k] = gen.uniform_sym();

    const CollocationGrid point(n_modes, xi, {1.0});
    const SpaceTimeStochField y = forward_solve(spec, mesh, model, point, control);

    double acc_track = 0.0, acc_sq = 0.0;
    for (std::size_t m = 1; m <= spec.n_steps; ++m) {
      acc_track += quad_form_diff(mass, y.slice(0, m), target.slice(m));
      acc_sq += quad_form(mass, y.slice(0, m));
    }
    const double track_s = 0.5 * dt * acc_track;
    const double sq_s = dt * acc_sq;
    const double f_s = track_s + 0.5 * spec.alpha * sq_s;

    const double count = static_cast<double>(s + 1);
    mean_track += (track_s - mean_track) / count;
    mean_sq += (sq_s - mean_sq) / count;
    const double delta = f_s - mean_f;
    mean_f += delta / count;
    m2_f += delta * (f_s - mean_f);
    auto ms = mean_state.values();
    auto ys = y.values();
    for (std::size_t k = 0; k < ms.size(); ++k) ms[k] += (ys[k] - ms[k]) / count;
  }

  double acc_mean_sq = 0.0;
  for (std::size_t m = 1; m <= spec.n_steps; ++m)
    acc_mean_sq += quad_form(mass, mean_state.slice(m));
  const double mean_state_sq = dt * acc_mean_sq;

  double acc_ctrl = 0.0;
  for (std::size_t m = 1; m <= spec.n_steps; ++m)
    acc_ctrl += quad_form(mass, control.slice(0, m));
  const double control_term = 0.5 * spec.beta * dt * acc_ctrl;

  // assembled in the same order as the collocation quadrature total:
  // tracking + variance + control
  McEstimate out;
  const double variance_term = 0.5 * spec.alpha * (mean_sq - mean_state_sq);
  out.estimate = mean_track + variance_term + control_term;
  out.std_error = n_samples > 1
                      ? std::sqrt(m2_f / (static_cast<double>(n_samples - 1) *
                                          static_cast<double>(n_samples)))
                      : 0.0;
  return out;
}

} // namespace riskpde

#include "riskpde/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riskpde/dynamics.hpp"
#include "riskpde/errors.hpp"
#include "riskpde/io.hpp"
#include "riskpde/objective.hpp"
#include "riskpde/optimizer.hpp"
#include "riskpde/oracle.hpp"
#include "riskpde/rng.hpp"
#include "riskpde/tridiag.hpp"

namespace riskpde {

namespace {

constexpr double kGradcheckTol = 1e-6;
constexpr double kGradcheckStep = 1e-5;
constexpr double kOracleTol = 1e-6;

/// Builds the setup and the output directory; nonzero return is the exit code.
int prepare(const RunConfig& cfg, std::optional<ProblemSetup>& setup) {
  try {
    setup.emplace(build_setup(cfg));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    ensure_output_dir(cfg.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kExitOutput;
  }
  return kExitOk;
}

SpaceTimeStochField zero_control(const ProblemSetup& s) {
  return SpaceTimeStochField(FieldRole::Control, s.grid.size(), s.spec.n_steps,
                             s.mesh.n_interior);
}

nlohmann::ordered_json breakdown_json(const ObjectiveBreakdown& b) {
  return {{"tracking", b.tracking},
          {"variance_raw", b.variance_raw},
          {"control", b.control},
          {"total", b.total}};
}

/// ||std y||^2 in the state norm: dt sum_q w_q sum_m (y_q - ybar)' M (y_q - ybar).
double state_variance_quadrature(const ProblemSpec& spec, const SpatialMesh& mesh,
                                 const CollocationGrid& grid, const SpaceTimeStochField& state) {
  const SymTridiag mass = assemble_mass(mesh);
  const SpaceTimeField mean_state = expectation(state, grid);
  double acc = 0.0;
  for (std::size_t q = 0; q < grid.size(); ++q) {
    double c = 0.0;
    for (std::size_t m = 1; m <= spec.n_steps; ++m)
      c += quad_form_diff(mass, state.slice(q, m), mean_state.slice(m));
    acc += grid.weight(q) * c;
  }
  return spec.dt() * acc;
}

} // namespace

int cmd_solve(const RunConfig& cfg) {
  std::optional<ProblemSetup> setup;
  if (int rc = prepare(cfg, setup)) return rc;
  const ProblemSetup& s = *setup;

  SolveResult res;
  try {
    res = solve(s.spec, s.mesh, s.model, s.grid, zero_control(s), s.solver);
  } catch (const StepFailure& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  const SolveReport& rep = res.report;

  const SpaceTimeStochField state = forward_solve(s.spec, s.mesh, s.model, s.grid, res.control);
  write_field_csv(std::filesystem::path(cfg.output_dir) / "u_star.csv",
                  expectation(res.control, s.grid), s.mesh);
  write_field_csv(std::filesystem::path(cfg.output_dir) / "mean_y.csv",
                  expectation(state, s.grid), s.mesh);
  write_field_csv(std::filesystem::path(cfg.output_dir) / "std_y.csv", std_field(state, s.grid),
                  s.mesh);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t it = 0; it < rep.iterations; ++it) {
    const ObjectiveBreakdown& b = rep.breakdown_history[it];
    rows.push_back({std::to_string(it + 1), format_double(b.total), format_double(b.tracking),
                    format_double(b.variance_raw), format_double(b.control),
                    format_double(rep.projected_grad_norms[it]),
                    format_double(it < rep.step_history.size() ? rep.step_history[it] : 0.0)});
  }
  write_csv(std::filesystem::path(cfg.output_dir) / "convergence.csv",
            {"iter", "J", "J_tracking", "J_variance", "J_control", "proj_grad_norm", "step"},
            rows);

  nlohmann::ordered_json report;
  report["command"] = "solve";
  report["config"] = canonical_json(cfg);
  report["converged"] = rep.converged;
  report["iterations"] = rep.iterations;
  report["objective"] = breakdown_json(rep.breakdown_history.back());
  report["projected_grad_norm"] = rep.projected_grad_norms.back();
  report["complementarity_residual"] = rep.complementarity_residual;
  report["control_norm"] = norm_U(res.control, s.spec, s.mesh, s.grid);
  write_json_file(std::filesystem::path(cfg.output_dir) / "report.json", report);

  std::cout << "solve: " << (rep.converged ? "converged" : "did not converge") << " after "
            << rep.iterations << " iterations, J = " << format_double(rep.objective_history.back())
            << ", residual = " << format_double(rep.projected_grad_norms.back()) << ", "
            << rep.wall_time << " s\n";
  if (!rep.converged) {
    std::cerr << "solver error: tolerance not reached within "
              << s.solver.max_iters << " iterations\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_gradcheck(const RunConfig& cfg) {
  std::optional<ProblemSetup> setup;
  if (int rc = prepare(cfg, setup)) return rc;
  const ProblemSetup& s = *setup;

  constexpr std::size_t kPairs = 20;
  double worst = 0.0;
  std::size_t worst_pair = 0;
  std::uint64_t worst_seed = 0;
  for (std::size_t p = 0; p < kPairs; ++p) {
    const std::uint64_t seed_u = SplitMix64::stream(cfg.seed, 2 * p).next();
    const std::uint64_t seed_w = SplitMix64::stream(cfg.seed, 2 * p + 1).next();
    const SpaceTimeStochField u =
        random_control(s.grid.size(), s.spec.n_steps, s.mesh.n_interior, seed_u);
    const SpaceTimeStochField w =
        random_control(s.grid.size(), s.spec.n_steps, s.mesh.n_interior, seed_w);

    const SpaceTimeStochField y = forward_solve(s.spec, s.mesh, s.model, s.grid, u);
    SpaceTimeStochField lambda = adjoint_solve(s.spec, s.mesh, s.model, s.grid, y);
    if (cfg.perturb_adjoint)
      for (double& v : lambda.values()) v *= 1.0 + 1e-3;
    const SpaceTimeStochField g = gradient_from_adjoint(u, lambda, s.spec);

    const double pairing = inner_product_U(g, w, s.spec, s.mesh, s.grid);
    const double fd = fd_directional(s.spec, s.mesh, s.model, s.grid, u, w, kGradcheckStep);
    const double rel = std::abs(fd - pairing) / std::max(std::abs(pairing), 1e-12);
    if (rel >= worst) {
      worst = rel;
      worst_pair = p;
      worst_seed = seed_u;
    }
  }
  const bool pass = worst <= kGradcheckTol;

  nlohmann::ordered_json report;
  report["command"] = "gradcheck";
  report["config"] = canonical_json(cfg);
  report["pairs"] = kPairs;
  report["fd_step"] = kGradcheckStep;
  report["max_relative_error"] = worst;
  report["worst_pair"] = worst_pair;
  report["worst_pair_seed"] = worst_seed;
  report["tolerance"] = kGradcheckTol;
  report["pass"] = pass;
  write_json_file(std::filesystem::path(cfg.output_dir) / "report.json", report);

  std::cout << "gradcheck: max relative error " << format_double(worst) << " over " << kPairs
            << " pairs (worst pair " << worst_pair << ", seed " << worst_seed << "): "
            << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitGradcheck;
}

int cmd_oracle_compare(const RunConfig& cfg) {
  std::optional<ProblemSetup> setup;
  if (int rc = prepare(cfg, setup)) return rc;
  const ProblemSetup& s = *setup;

  if (s.spec.constrained) {
    std::cerr << "oracle-compare: needs constrained = false; the optimality system is only "
                 "linear without the cone constraint\n";
    return kExitConfig;
  }

  KktSolution kkt;
  try {
    kkt = kkt_solve(s.spec, s.mesh, s.model, s.grid);
  } catch (const DimensionGuard& e) {
    std::cerr << "oracle-compare: " << e.what() << '\n';
    return kExitConfig;
  }

  SolveResult res;
  try {
    res = solve(s.spec, s.mesh, s.model, s.grid, zero_control(s), s.solver);
  } catch (const StepFailure& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  if (!res.report.converged) {
    std::cerr << "solver error: tolerance not reached within " << s.solver.max_iters
              << " iterations\n";
    return kExitSolver;
  }

  const double kkt_norm = norm_U(kkt.control, s.spec, s.mesh, s.grid);
  const double diff = norm_U(lin_comb(1.0, res.control, -1.0, kkt.control), s.spec, s.mesh, s.grid) /
                      (1.0 + kkt_norm);
  const bool pass = diff <= kOracleTol;

  nlohmann::ordered_json report;
  report["command"] = "oracle-compare";
  report["config"] = canonical_json(cfg);
  report["scaled_control_distance"] = diff;
  report["kkt_control_norm"] = kkt_norm;
  report["optimizer_iterations"] = res.report.iterations;
  report["tolerance"] = kOracleTol;
  report["pass"] = pass;
  write_json_file(std::filesystem::path(cfg.output_dir) / "report.json", report);

  std::cout << "oracle-compare: scaled control distance " << format_double(diff) << ": "
            << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitOracle;
}

int cmd_alpha_sweep(const RunConfig& cfg, const std::vector<double>& alphas) {
  if (alphas.size() < 2) {
    std::cerr << "alpha-sweep: need at least 2 alphas\n";
    return kExitConfig;
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= 0.0) || !std::isfinite(alphas[i])) {
      std::cerr << "alpha-sweep: alphas must be finite and >= 0\n";
      return kExitConfig;
    }
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      std::cerr << "alpha-sweep: alphas must be strictly ascending\n";
      return kExitConfig;
    }
  }

  std::optional<ProblemSetup> setup;
  if (int rc = prepare(cfg, setup)) return rc;
  const ProblemSetup& s = *setup;

  std::vector<std::vector<std::string>> rows;
  nlohmann::ordered_json row_reports = nlohmann::ordered_json::array();
  for (double alpha : alphas) {
    ProblemSpec spec = s.spec;
    spec.alpha = alpha;

    SolveResult res;
    try {
      res = solve(spec, s.mesh, s.model, s.grid, zero_control(s), s.solver);
    } catch (const StepFailure& e) {
      std::cerr << "solver error at alpha " << format_double(alpha) << ": " << e.what() << '\n';
      return kExitSolver;
    }
    if (!res.report.converged) {
      std::cerr << "solver error: alpha " << format_double(alpha) << " not converged within "
                << s.solver.max_iters << " iterations\n";
      return kExitSolver;
    }

    const ObjectiveBreakdown& b = res.report.breakdown_history.back();
    const SpaceTimeStochField state = forward_solve(spec, s.mesh, s.model, s.grid, res.control);
    // half the squared std-norm; equals variance_raw/alpha exactly when alpha > 0
    const double variance_of_state =
        alpha > 0.0 ? b.variance_raw / alpha
                    : 0.5 * state_variance_quadrature(spec, s.mesh, s.grid, state);
    const double control_norm = norm_U(res.control, spec, s.mesh, s.grid);

    rows.push_back({format_double(alpha), format_double(b.total), format_double(b.tracking),
                    format_double(variance_of_state), format_double(control_norm)});
    row_reports.push_back({{"alpha", alpha},
                           {"J_total", b.total},
                           {"tracking", b.tracking},
                           {"variance_of_optimal_state", variance_of_state},
                           {"control_norm", control_norm},
                           {"iterations", res.report.iterations}});
    std::cout << "alpha-sweep: alpha " << format_double(alpha) << " -> J "
              << format_double(b.total) << ", state variance "
              << format_double(variance_of_state) << '\n';
  }

  write_csv(std::filesystem::path(cfg.output_dir) / "alpha_sweep.csv",
            {"alpha", "J_total", "tracking", "variance_of_optimal_state", "control_norm"}, rows);

  nlohmann::ordered_json report;
  report["command"] = "alpha-sweep";
  report["config"] = canonical_json(cfg);
  report["rows"] = row_reports;
  write_json_file(std::filesystem::path(cfg.output_dir) / "report.json", report);
  return kExitOk;
}

} // namespace riskpde

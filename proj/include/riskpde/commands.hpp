#pragma once

#include <vector>

#include "riskpde/config.hpp"

namespace riskpde {

/// Process exit codes shared by the CLI and the command implementations.
/// 1 is left to uncaught internal errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;   // parse/validation failure
inline constexpr int kExitSolver = 3;   // solver failure (non-convergence, step failure)
inline constexpr int kExitOutput = 4;   // output directory not writable
inline constexpr int kExitGradcheck = 5;
inline constexpr int kExitOracle = 6;   // oracle mismatch beyond tolerance

/// Runs the optimizer from zero and writes u_star.csv, mean_y.csv,
/// std_y.csv, convergence.csv and report.json into cfg.output_dir. The
/// field CSVs reduce over collocation nodes: mean_y/std_y are the state
/// mean and standard deviation, u_star.csv is the node-mean of the control.
int cmd_solve(const RunConfig& cfg);

/// 20 seeded random (control, direction) pairs; compares the adjoint
/// gradient pairing against a central finite difference of the objective
/// and reports the worst relative error (gate 1e-6, FD step 1e-5).
int cmd_gradcheck(const RunConfig& cfg);

/// Solves the unconstrained problem twice, by projected gradient descent
/// and by the dense optimality-system oracle, and compares the controls
/// (gate 1e-6 on the scaled control-space distance).
int cmd_oracle_compare(const RunConfig& cfg);

/// Re-solves for each alpha and writes alpha_sweep.csv plus report.json.
/// alphas must hold at least two strictly increasing nonnegative values.
int cmd_alpha_sweep(const RunConfig& cfg, const std::vector<double>& alphas);

} // namespace riskpde

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskpde/commands.hpp"
#include "riskpde/config.hpp"
#include "riskpde/errors.hpp"
#include "riskpde/parallel.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::size_t threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Path to the run configuration (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "Output directory (overrides the config)");
  cmd->add_option("--threads", args.threads, "Worker thread cap (default 1); never changes results");
}

int load(const CommonArgs& args, riskpde::RunConfig& cfg) {
  try {
    cfg = riskpde::parse_config(args.config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return riskpde::kExitConfig;
  }
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  riskpde::set_max_threads(args.threads);
  return riskpde::kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse parabolic control solver"};
  app.require_subcommand(1);

  CommonArgs solve_args, grad_args, oracle_args, sweep_args;
  std::vector<double> alphas{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};

  CLI::App* solve = app.add_subcommand("solve", "Run the optimizer and write fields and report");
  add_common(solve, solve_args);
  CLI::App* gradcheck =
      app.add_subcommand("gradcheck", "Certify the adjoint gradient against finite differences");
  add_common(gradcheck, grad_args);
  CLI::App* oracle = app.add_subcommand(
      "oracle-compare", "Cross-check the optimizer against the dense optimality system");
  add_common(oracle, oracle_args);
  CLI::App* sweep = app.add_subcommand("alpha-sweep", "Re-solve over a list of alphas");
  add_common(sweep, sweep_args);
  sweep->add_option("--alphas", alphas, "Ascending risk-aversion values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? riskpde::kExitOk : riskpde::kExitConfig;
  }

  riskpde::RunConfig cfg;
  if (solve->parsed()) {
    if (int rc = load(solve_args, cfg)) return rc;
    return riskpde::cmd_solve(cfg);
  }
  if (gradcheck->parsed()) {
    if (int rc = load(grad_args, cfg)) return rc;
    return riskpde::cmd_gradcheck(cfg);
  }
  if (oracle->parsed()) {
    if (int rc = load(oracle_args, cfg)) return rc;
    return riskpde::cmd_oracle_compare(cfg);
  }
  if (int rc = load(sweep_args, cfg)) return rc;
  return riskpde::cmd_alpha_sweep(cfg, alphas);
}

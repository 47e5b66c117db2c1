#include "cli_commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

int verbosity_from_env() {
  const char* level = std::getenv("QDETECT_LOG");
  if (!level) return 0;
  const std::string value(level);
  if (value == "info") return 1;
  if (value == "trace") return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using qdetect::cli::Command;
  using qdetect::cli::RunConfig;

  RunConfig cfg;
  cfg.verbosity = verbosity_from_env();
  if (cfg.verbosity > 0) cfg.log = &std::cerr;

  CLI::App app{"Minimum-error measurement solver for quantum state "
               "discrimination"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--gap-tol", cfg.gap_tol,
                 "Duality gap target for the dual solver");
  app.add_option("--rank-tol", cfg.rank_tol,
                 "Relative eigenvalue cutoff for rank decisions");
  app.add_option("--check-tol", cfg.check_tol,
                 "Residual tolerance for the optimality verdict");
  app.add_option("--format", cfg.format, "Report format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", cfg.output, "Write the report to this file");
  app.add_option("--herm-tol", cfg.tolerances.herm_tol,
                 "Hermiticity tolerance for input validation");
  app.add_option("--psd-tol", cfg.tolerances.psd_tol,
                 "Positivity tolerance for input validation");
  app.add_option("--trace-tol", cfg.tolerances.trace_tol,
                 "Unit-trace tolerance for input validation");
  app.add_option("--prior-tol", cfg.tolerances.prior_tol,
                 "Prior normalization tolerance for input validation");

  CLI::App* solve =
      app.add_subcommand("solve", "Compute the optimal measurement");
  solve->add_option("input", cfg.input, "Ensemble file")->required();

  CLI::App* verify = app.add_subcommand(
      "verify", "Check a measurement against an ensemble");
  verify->add_option("input", cfg.input, "Ensemble file")->required();
  verify->add_option("--measurement", cfg.measurement_path,
                     "Measurement file")
      ->required();
  verify->add_option("--dual", cfg.dual_path,
                     "Dual matrix file; omit to check feasibility only");

  CLI::App* compare = app.add_subcommand(
      "compare", "Solve and compare with the least-squares measurement");
  compare->add_option("input", cfg.input, "Pure-state ensemble file")
      ->required();

  CLI::App* generate =
      app.add_subcommand("generate", "Write a seeded random ensemble");
  generate->add_option("--kind", cfg.kind, "State kind")
      ->check(CLI::IsMember({"pure", "mixed"}));
  generate->add_option("--dim", cfg.dim, "Hilbert space dimension");
  generate->add_option("--states", cfg.num_states, "Number of states");
  generate->add_option("--seed", cfg.seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) cfg.command = Command::solve;
  if (verify->parsed()) cfg.command = Command::verify;
  if (compare->parsed()) cfg.command = Command::compare;
  if (generate->parsed()) cfg.command = Command::generate;

  return qdetect::cli::run(cfg, std::cout, std::cerr);
}

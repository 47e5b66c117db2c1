#pragma once

#include "qdetect/pipeline.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace qdetect::cli {

enum class Command { solve, verify, compare, generate };

struct RunConfig {
  Command command = Command::solve;
  std::string input;             // ensemble file
  std::string measurement_path;  // verify
  std::string dual_path;         // verify, optional
  std::string output;            // empty writes to the stream given to run
  std::string format = "text";
  Tolerances tolerances;
  double gap_tol = 1e-8;
  double rank_tol = 1e-6;
  double check_tol = 1e-6;
  std::uint64_t seed = 0;  // generate
  std::string kind = "pure";
  Index dim = 2;
  Index num_states = 2;
  int verbosity = 0;
  std::ostream* log = nullptr;
};

/// Execute one command. Reports go to out (or the configured output
/// file), errors go to err in the configured format. Returns the exit
/// status: 0 certified optimal (or feasible when only feasibility was
/// asked), 2 solved but certification failed, 3 invalid input, 4 solver
/// or recovery failure.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace qdetect::cli

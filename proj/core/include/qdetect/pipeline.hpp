#pragma once

#include "qdetect/certify.hpp"
#include "qdetect/dual_solver.hpp"
#include "qdetect/recovery.hpp"

namespace qdetect {

struct PipelineOptions {
  Tolerances tolerances;
  SolverOptions solver;
  RecoveryOptions recovery;  // recovery.rank_tol also drives reduce_to_span
  double check_tol = 1e-6;
};

struct SolveOutcome {
  Matrix x;                 // dual matrix on the original space
  Measurement measurement;  // operators on the original space
  OptimalityReport report;
  SolverTrace trace;
  RealVector coefficients;
  Index reduced_dim = 0;    // k after span reduction
};

/// Full pipeline: reduce to the span of the states, solve the dual SDP,
/// recover the measurement through the null-space system, embed both
/// back, and certify optimality against the original ensemble.
SolveOutcome solve_ensemble(const Ensemble& e, const PipelineOptions& opts = {});

}  // namespace qdetect

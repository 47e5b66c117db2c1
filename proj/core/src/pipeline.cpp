#include "qdetect/pipeline.hpp"

#include "qdetect/linalg.hpp"

#include <utility>

namespace qdetect {

SolveOutcome solve_ensemble(const Ensemble& e, const PipelineOptions& opts) {
  const auto [reduced, embedding] =
      reduce_to_span(e, opts.recovery.rank_tol);

  SolveOutcome outcome;
  outcome.reduced_dim = reduced.dim();

  auto [cert, trace] = solve_dual(reduced, opts.solver);
  outcome.trace = std::move(trace);
  RecoveryResult recovered =
      recover_measurement(cert, reduced, opts.recovery);

  outcome.x = embedding.embed(cert.x);
  outcome.measurement.operators =
      embedding.embed_measurement(recovered.measurement.operators);
  // Rank-one factors only describe the reduced space; on a genuine
  // embedding the first operator also absorbs the complement projector,
  // which no single vector can represent.
  if (reduced.dim() == e.dim() && recovered.measurement.vectors) {
    outcome.measurement.vectors = std::move(recovered.measurement.vectors);
  }
  outcome.coefficients = std::move(recovered.coefficients);

  outcome.report =
      check_optimality(e, outcome.measurement, outcome.x, opts.check_tol);
  return outcome;
}

}  // namespace qdetect

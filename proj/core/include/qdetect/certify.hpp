#pragma once

#include "qdetect/ensemble.hpp"
#include "qdetect/recovery.hpp"

namespace qdetect {

/// Probability of a correct decision sum_i p_i tr(rho_i Pi_i).
double prob_correct(const Ensemble& e, const Measurement& mmt);

struct ConditionCheck {
  bool passed = false;
  double magnitude = 0.0;  // measured residual
};

/// Independent verification of the optimality conditions. Every check
/// is recomputed from the ensemble, the measurement, and the dual
/// matrix alone; nothing is taken from the solver.
struct OptimalityReport {
  double p_correct = 0.0;
  double dual_objective = 0.0;  // tr(X)
  double gap = 0.0;             // dual_objective - p_correct
  ConditionCheck measurement_psd;       // Pi_i >= 0 and Hermitian
  ConditionCheck resolution;            // sum Pi_i = I
  ConditionCheck dual_feasible;         // X - rho'_i >= 0
  ConditionCheck slackness;             // (X - rho'_i) Pi_i = 0
  ConditionCheck lagrangian_hermitian;  // sum rho'_i Pi_i Hermitian
  ConditionCheck dual_dominance;        // sum rho'_i Pi_i >= rho'_j
  ConditionCheck gap_check;             // |gap| <= tol
  bool optimal = false;                 // all of the above within tol
  double tol = 0.0;
};

OptimalityReport check_optimality(const Ensemble& e, const Measurement& mmt,
                                  const Matrix& x, double check_tol = 1e-6);

/// Measurement feasibility alone (PSD and resolution of the identity)
/// plus the decision probability, for verification without a dual
/// matrix. Dual-side fields keep their defaults.
OptimalityReport check_feasibility(const Ensemble& e, const Measurement& mmt,
                                   double check_tol = 1e-6);

/// Closed-form optimum for two states, (1 + ||p1 rho1 - p2 rho2||_1)/2
/// with the trace norm. Throws ValidationError unless m = 2.
double helstrom_binary_pd(const Ensemble& e);

}  // namespace qdetect

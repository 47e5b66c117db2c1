#pragma once

#include "qdetect/ensemble.hpp"
#include "qdetect/recovery.hpp"

#include <vector>

namespace qdetect {

/// Pure-state view of an ensemble: unit vectors phi_i and the frame
/// matrix Psi whose columns are the weighted vectors sqrt(p_i) phi_i.
struct PureEnsembleView {
  std::vector<Vector> phi;
  std::vector<double> priors;
  Matrix psi;  // n x m, column i = sqrt(p_i) phi_i
};

/// Extract the pure-state view. States given as matrices must be
/// rank-one within rank_tol; throws ValidationError otherwise.
PureEnsembleView pure_view(const Ensemble& e, double rank_tol = 1e-6);

/// Least-squares measurement vectors chi_i = (Psi Psi^dagger)^{-1/2} psi_i.
/// Requires the states to span the space (Psi Psi^dagger positive
/// definite); reduce_to_span first when they do not.
std::vector<Vector> lsm_vectors(const PureEnsembleView& view,
                                double psd_tol = 1e-8);

/// The vectors chi_i as a rank-one Measurement.
Measurement lsm_measurement(const PureEnsembleView& view,
                            double psd_tol = 1e-8);

/// Detection probability sum_i p_i |<chi_i|phi_i>|^2 of the
/// least-squares measurement.
double lsm_prob_correct(const PureEnsembleView& view, double psd_tol = 1e-8);

}  // namespace qdetect

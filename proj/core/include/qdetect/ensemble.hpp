#pragma once

#include "qdetect/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qdetect {

/// One hypothesis: a density operator with its prior probability. The
/// unit vector is kept alongside rho when the state was given in pure form.
struct WeightedState {
  double prior = 0.0;
  Matrix rho;
  std::optional<Vector> pure;
};

/// A single violated input invariant.
struct ValidationIssue {
  std::string invariant;     // "hermitian", "psd", "unit_trace", ...
  std::ptrdiff_t state = -1; // offending state index, -1 for ensemble-level issues
  double magnitude = 0.0;    // size of the violation
};

using ValidationReport = std::vector<ValidationIssue>;

/// Check every ensemble invariant: n x n Hermitian PSD unit-trace states
/// with finite entries, strictly positive priors summing to 1.
ValidationReport validate(Index dim, const std::vector<WeightedState>& states,
                          const Tolerances& tol = {});

class Ensemble;
std::pair<Ensemble, class Embedding> reduce_to_span(const Ensemble& e,
                                                    double rank_tol);

/// Prior-weighted hypotheses on an n-dimensional space. Immutable after
/// construction; the weighted operators rho'_i = p_i rho_i are cached.
class Ensemble {
public:
  /// Validates the states and priors; throws ValidationError describing
  /// the violations otherwise.
  static Ensemble create(Index dim, std::vector<WeightedState> states,
                         const Tolerances& tol = {});

  Index dim() const { return dim_; }
  std::size_t size() const { return states_.size(); }

  double prior(std::size_t i) const { return states_[i].prior; }
  const Matrix& rho(std::size_t i) const { return states_[i].rho; }
  const std::optional<Vector>& pure(std::size_t i) const {
    return states_[i].pure;
  }
  const Matrix& weighted(std::size_t i) const { return weighted_[i]; }
  const std::vector<Matrix>& weighted() const { return weighted_; }

  /// True when every state carries a pure-state vector.
  bool all_pure() const;

private:
  Ensemble() = default;
  static Ensemble trusted(Index dim, std::vector<WeightedState> states);
  friend std::pair<Ensemble, Embedding> reduce_to_span(const Ensemble&, double);

  Index dim_ = 0;
  std::vector<WeightedState> states_;
  std::vector<Matrix> weighted_;
};

/// Isometry between a k-dimensional reduced space and the original
/// n-dimensional one.
class Embedding {
public:
  /// The columns of the isometry must be orthonormal (U^dagger U = I).
  explicit Embedding(Matrix isometry);
  static Embedding identity(Index n);

  Index full_dim() const { return u_.rows(); }
  Index reduced_dim() const { return u_.cols(); }
  bool is_identity() const { return identity_; }

  Matrix embed(const Matrix& reduced) const;   // U M U^dagger
  Vector embed(const Vector& reduced) const;   // U v
  Matrix reduce(const Matrix& full) const;     // U^dagger M U

  /// Embed measurement operators into the full space. The orthogonal
  /// complement of the reduced space carries no state support, so it is
  /// completed into the first outcome to preserve the resolution of
  /// the identity.
  std::vector<Matrix> embed_measurement(const std::vector<Matrix>& reduced) const;

private:
  Matrix u_;
  bool identity_ = false;
};

/// Project the ensemble onto the common span of its states' supports.
/// Returns the input unchanged with an identity embedding when the
/// states already span the whole space.
std::pair<Ensemble, Embedding> reduce_to_span(const Ensemble& e,
                                              double rank_tol = 1e-6);

}  // namespace qdetect

#pragma once

#include "qdetect/dual_solver.hpp"
#include "qdetect/ensemble.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qdetect {

struct RecoveryOptions {
  double rank_tol = 1e-6;        // relative null-space detection threshold
  double resolution_tol = 1e-6;  // allowed max-norm of sum(Pi) - I
  double coeff_tol = 1e-6;       // clamp window for least-squares signs
  double psd_tol = 1e-8;
  int max_escalations = 3;       // rank_tol * 10^k retries
};

/// Orthonormal bases of the null spaces N(X - rho'_i).
struct NullSpaceBundle {
  std::vector<std::vector<Vector>> vectors;  // vectors[i][j] = q_ij
  std::size_t total_columns() const;
  std::size_t count(std::size_t i) const { return vectors[i].size(); }
};

/// Eigenvectors of X - rho'_i with eigenvalue at most
/// rank_tol * max(lambda_max(X - rho'_i), tr X). Throws RecoveryError
/// when every null space is empty (X cannot be optimal then) or when
/// some null space exceeds the rank of its state.
NullSpaceBundle null_space_basis(const DualCertificate& cert,
                                 const Ensemble& e, double rank_tol);

/// Real form of the constraint sum_ij a_ij q_ij q_ij^dagger = I:
/// columns of y are the stacked (real over imaginary) mvec(q q^dagger),
/// in lexicographic (i, j) order, and e is the stacked mvec(I).
struct CoefficientSystem {
  RealMatrix y;  // 2 n^2 rows, one column per null-space vector
  RealVector e;
};

CoefficientSystem assemble_system(const NullSpaceBundle& bundle, Index n);

/// Nonnegative coefficients with Y a = e: the least-squares solution
/// when Y has full column rank (negatives within coeff_tol clamped to
/// zero, larger ones an error), otherwise a minimum-residual LP through
/// the simplex. Throws RecoveryError when no acceptable solution exists.
RealVector solve_coefficients(const CoefficientSystem& system,
                              const RecoveryOptions& opts);

struct Measurement {
  std::vector<Matrix> operators;
  /// Rank-one factors mu_i with Pi_i = mu_i mu_i^dagger, present when
  /// every null space is at most one-dimensional (mu_i = 0 for states
  /// with an empty null space).
  std::optional<std::vector<Vector>> vectors;
};

/// Operators Pi_i = sum_j a_ij q_ij q_ij^dagger from the bundle and its
/// coefficients.
Measurement build_measurement(const NullSpaceBundle& bundle,
                              const RealVector& coeffs, Index n);

struct RecoveryResult {
  Measurement measurement;
  RealVector coefficients;
  NullSpaceBundle bundle;
  double rank_tol_used = 0.0;
  double resolution_error = 0.0;  // max-norm of sum(Pi) - I
};

/// Full recovery with retries: when the null spaces come out too small
/// to resolve the identity, rank_tol is escalated by factors of 10 up
/// to max_escalations times. A null space larger than the rank of its
/// state aborts immediately (escalation can only grow it further).
RecoveryResult recover_measurement(const DualCertificate& cert,
                                   const Ensemble& e,
                                   const RecoveryOptions& opts = {});

}  // namespace qdetect

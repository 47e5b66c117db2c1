#include "qdetect/recovery.hpp"

#include "qdetect/linalg.hpp"
#include "qdetect/simplex.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

namespace qdetect {

namespace {

// Numerical rank at the same relative threshold the null-space scan uses.
Index numerical_rank(const Matrix& m, double rank_tol) {
  const EigenDecomposition eig = hermitian_eig(hermitian_part(m), 1e-6);
  const double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (top <= 0.0) return 0;
  Index rank = 0;
  for (Index j = 0; j < eig.eigenvalues.size(); ++j)
    if (eig.eigenvalues(j) > rank_tol * top) ++rank;
  return rank;
}

// A rank-bound violation cannot be cured by retrying with a larger
// rank_tol (the null spaces only grow), so it gets its own type to
// stop the escalation loop.
class RankBoundError : public RecoveryError {
public:
  using RecoveryError::RecoveryError;
};

NullSpaceBundle bundle_at(const DualCertificate& cert, const Ensemble& e,
                          double rank_tol) {
  const Index n = e.dim();
  const double trace_x = cert.x.trace().real();
  NullSpaceBundle bundle;
  bundle.vectors.resize(e.size());

  for (std::size_t i = 0; i < e.size(); ++i) {
    const Matrix slack = hermitian_part(cert.x - e.weighted(i));
    const EigenDecomposition eig = hermitian_eig(slack);
    // Relative to the slack's own scale, with an absolute floor from
    // tr(X): for a state achieving equality the slack block is nearly
    // zero and its lambda_max no longer sets a usable scale.
    const double threshold =
        rank_tol * std::max(eig.eigenvalues(n - 1), trace_x);
    for (Index j = 0; j < n; ++j)
      if (eig.eigenvalues(j) <= threshold)
        bundle.vectors[i].push_back(eig.eigenvectors.col(j));

    const Index rho_rank = numerical_rank(e.rho(i), rank_tol);
    if (static_cast<Index>(bundle.vectors[i].size()) > rho_rank) {
      std::ostringstream msg;
      msg << "null_space_basis: state " << i << " has a "
          << bundle.vectors[i].size()
          << "-dimensional null space but rank " << rho_rank
          << "; the dual matrix cannot be optimal";
      throw RankBoundError(msg.str());
    }
  }

  if (bundle.total_columns() == 0)
    throw RecoveryError(
        "null_space_basis: every null space is empty; the dual matrix "
        "cannot be optimal (some measurement operator must be nonzero)");
  return bundle;
}

}  // namespace

std::size_t NullSpaceBundle::total_columns() const {
  std::size_t total = 0;
  for (const auto& basis : vectors) total += basis.size();
  return total;
}

NullSpaceBundle null_space_basis(const DualCertificate& cert,
                                 const Ensemble& e, double rank_tol) {
  return bundle_at(cert, e, rank_tol);
}

CoefficientSystem assemble_system(const NullSpaceBundle& bundle, Index n) {
  const Index columns = static_cast<Index>(bundle.total_columns());
  if (columns == 0)
    throw RecoveryError("assemble_system: bundle has no vectors");

  CoefficientSystem sys;
  sys.y.resize(2 * n * n, columns);
  Index col = 0;
  for (const auto& basis : bundle.vectors)
    for (const Vector& q : basis) {
      const Vector stacked = mvec(q * q.adjoint());
      sys.y.col(col).head(n * n) = stacked.real();
      sys.y.col(col).tail(n * n) = stacked.imag();
      ++col;
    }

  const Vector identity = mvec(Matrix::Identity(n, n));
  sys.e.resize(2 * n * n);
  sys.e.head(n * n) = identity.real();
  sys.e.tail(n * n).setZero();
  return sys;
}

RealVector solve_coefficients(const CoefficientSystem& system,
                              const RecoveryOptions& opts) {
  Eigen::JacobiSVD<RealMatrix> svd(
      system.y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double top_sv = svd.singularValues()(0);
  const bool full_rank =
      svd.singularValues()(svd.singularValues().size() - 1) >
      opts.rank_tol * top_sv;

  if (full_rank) {
    RealVector a = svd.solve(system.e);
    for (Index j = 0; j < a.size(); ++j) {
      if (a(j) < -opts.coeff_tol) {
        std::ostringstream msg;
        msg << "solve_coefficients: least-squares coefficient " << j << " is "
            << a(j) << ", beyond the clamp window " << -opts.coeff_tol;
        throw RecoveryError(msg.str());
      }
      if (a(j) < 0.0) a(j) = 0.0;
    }
    return a;
  }

  // Degenerate column set: minimize the l1 residual of Y a = e over
  // a >= 0 by splitting the residual into u - v with u, v >= 0. This is
  // always feasible, so float dust in Y and e cannot masquerade as LP
  // infeasibility.
  const Index rows = system.y.rows();
  const Index cols = system.y.cols();
  RealMatrix a_lp(rows, cols + 2 * rows);
  a_lp.leftCols(cols) = system.y;
  a_lp.block(0, cols, rows, rows) = RealMatrix::Identity(rows, rows);
  a_lp.rightCols(rows) = -RealMatrix::Identity(rows, rows);
  RealVector c_lp = RealVector::Zero(cols + 2 * rows);
  c_lp.tail(2 * rows).setOnes();

  const LpResult lp = simplex_lp(c_lp, a_lp, system.e);
  if (lp.status != LpStatus::optimal)
    throw RecoveryError("solve_coefficients: residual LP did not solve");
  if (lp.objective > opts.resolution_tol * static_cast<double>(rows))
    throw RecoveryError(
        "solve_coefficients: no nonnegative combination resolves the "
        "identity (best l1 residual " +
        std::to_string(lp.objective) + ")");
  return lp.x.head(cols);
}

Measurement build_measurement(const NullSpaceBundle& bundle,
                              const RealVector& coeffs, Index n) {
  if (static_cast<std::size_t>(coeffs.size()) != bundle.total_columns())
    throw RecoveryError("build_measurement: coefficient count mismatch");

  Measurement mmt;
  bool rank_one = true;
  std::vector<Vector> factors;
  Index col = 0;
  for (const auto& basis : bundle.vectors) {
    Matrix op = Matrix::Zero(n, n);
    for (const Vector& q : basis) {
      op += coeffs(col) * (q * q.adjoint());
      ++col;
    }
    mmt.operators.push_back(hermitian_part(op));
    if (basis.size() > 1) rank_one = false;
    if (rank_one) {
      factors.push_back(basis.empty()
                            ? Vector(Vector::Zero(n))
                            : Vector(std::sqrt(std::max(
                                         coeffs(col - 1), 0.0)) *
                                     basis.front()));
    }
  }
  if (rank_one) mmt.vectors = std::move(factors);
  return mmt;
}

RecoveryResult recover_measurement(const DualCertificate& cert,
                                   const Ensemble& e,
                                   const RecoveryOptions& opts) {
  const Index n = e.dim();
  std::string last_error;

  for (int attempt = 0; attempt <= opts.max_escalations; ++attempt) {
    RecoveryOptions scaled = opts;
    scaled.rank_tol = opts.rank_tol * std::pow(10.0, attempt);
    try {
      RecoveryResult result;
      result.bundle = bundle_at(cert, e, scaled.rank_tol);
      const CoefficientSystem sys = assemble_system(result.bundle, n);
      result.coefficients = solve_coefficients(sys, scaled);
      result.measurement = build_measurement(result.bundle,
                                             result.coefficients, n);
      Matrix total = Matrix::Zero(n, n);
      for (const Matrix& op : result.measurement.operators) total += op;
      result.resolution_error = max_abs(total - Matrix::Identity(n, n));
      if (result.resolution_error > scaled.resolution_tol)
        throw RecoveryError(
            "recover_measurement: operators miss the identity by " +
            std::to_string(result.resolution_error));
      result.rank_tol_used = scaled.rank_tol;
      return result;
    } catch (const RankBoundError&) {
      throw;
    } catch (const RecoveryError& err) {
      last_error = err.what();
    }
  }
  throw RecoveryError(last_error + " (after " +
                      std::to_string(opts.max_escalations + 1) +
                      " rank_tol escalations)");
}

}  // namespace qdetect

#include "qdetect/ensemble.hpp"

#include "qdetect/linalg.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace qdetect {

namespace {

std::string format_issues(const ValidationReport& report) {
  std::ostringstream msg;
  msg << "invalid ensemble:";
  std::size_t shown = 0;
  for (const ValidationIssue& issue : report) {
    if (shown == 5) {
      msg << " ... (" << report.size() - shown << " more)";
      break;
    }
    msg << (shown ? ";" : "") << " " << issue.invariant;
    if (issue.state >= 0) msg << " (state " << issue.state << ")";
    msg << " violated by " << issue.magnitude;
    ++shown;
  }
  return msg.str();
}

}  // namespace

ValidationReport validate(Index dim, const std::vector<WeightedState>& states,
                          const Tolerances& tol) {
  ValidationReport report;
  if (dim < 1)
    report.push_back({"dimension_positive", -1, static_cast<double>(dim)});
  if (states.empty()) report.push_back({"nonempty", -1, 0.0});

  double prior_sum = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const WeightedState& s = states[i];
    prior_sum += s.prior;
    if (!(s.prior > 0.0) || s.prior > 1.0 + tol.prior_tol)
      report.push_back({"prior_positive", idx, s.prior});
    if (s.rho.rows() != dim || s.rho.cols() != dim) {
      report.push_back(
          {"dimension", idx, static_cast<double>(s.rho.rows())});
      continue;  // the remaining checks assume an n x n matrix
    }
    if (!all_finite(s.rho)) {
      report.push_back({"finite", idx, 0.0});
      continue;
    }
    const double herm_err = hermiticity_error(s.rho);
    if (herm_err > tol.herm_tol) report.push_back({"hermitian", idx, herm_err});
    const double min_eig = min_eigenvalue(hermitian_part(s.rho));
    if (min_eig < -tol.psd_tol) report.push_back({"psd", idx, -min_eig});
    const double trace_err = std::abs(s.rho.trace().real() - 1.0);
    if (trace_err > tol.trace_tol)
      report.push_back({"unit_trace", idx, trace_err});
    if (s.pure) {
      if (s.pure->size() != dim) {
        report.push_back({"vector_dimension", idx,
                          static_cast<double>(s.pure->size())});
      } else {
        const double norm_err = std::abs(s.pure->norm() - 1.0);
        if (norm_err > tol.trace_tol)
          report.push_back({"unit_vector", idx, norm_err});
      }
    }
  }
  if (!states.empty()) {
    const double sum_err = std::abs(prior_sum - 1.0);
    if (sum_err > tol.prior_tol)
      report.push_back({"priors_sum", -1, sum_err});
  }
  return report;
}

Ensemble Ensemble::create(Index dim, std::vector<WeightedState> states,
                          const Tolerances& tol) {
  const ValidationReport report = validate(dim, states, tol);
  if (!report.empty()) throw ValidationError(format_issues(report));
  return trusted(dim, std::move(states));
}

Ensemble Ensemble::trusted(Index dim, std::vector<WeightedState> states) {
  Ensemble e;
  e.dim_ = dim;
  e.states_ = std::move(states);
  e.weighted_.reserve(e.states_.size());
  for (const WeightedState& s : e.states_)
    e.weighted_.push_back(s.prior * s.rho);
  return e;
}

bool Ensemble::all_pure() const {
  for (const WeightedState& s : states_)
    if (!s.pure) return false;
  return true;
}

Embedding::Embedding(Matrix isometry) : u_(std::move(isometry)) {
  if (u_.rows() < u_.cols() || u_.cols() < 1)
    throw ValidationError("embedding: isometry must be tall n x k, k >= 1");
  const double err = max_abs(u_.adjoint() * u_ -
                             Matrix::Identity(u_.cols(), u_.cols()));
  if (err > 1e-10)
    throw ValidationError("embedding: columns are not orthonormal");
  identity_ = u_.rows() == u_.cols();
}

Embedding Embedding::identity(Index n) {
  Embedding e(Matrix::Identity(n, n));
  e.identity_ = true;
  return e;
}

Matrix Embedding::embed(const Matrix& reduced) const {
  if (identity_) return reduced;
  return u_ * reduced * u_.adjoint();
}

Vector Embedding::embed(const Vector& reduced) const {
  if (identity_) return reduced;
  return u_ * reduced;
}

Matrix Embedding::reduce(const Matrix& full) const {
  if (identity_) return full;
  return u_.adjoint() * full * u_;
}

std::vector<Matrix> Embedding::embed_measurement(
    const std::vector<Matrix>& reduced) const {
  std::vector<Matrix> full;
  full.reserve(reduced.size());
  for (const Matrix& op : reduced) full.push_back(embed(op));
  if (!identity_ && !full.empty()) {
    const Index n = u_.rows();
    full[0] += Matrix::Identity(n, n) - u_ * u_.adjoint();
  }
  return full;
}

std::pair<Ensemble, Embedding> reduce_to_span(const Ensemble& e,
                                              double rank_tol) {
  const Index n = e.dim();
  Matrix total = Matrix::Zero(n, n);
  for (const Matrix& w : e.weighted()) total += w;
  const EigenDecomposition eig = hermitian_eig(hermitian_part(total));
  const double threshold = rank_tol * eig.eigenvalues(n - 1);

  Index k = 0;
  for (Index j = 0; j < n; ++j)
    if (eig.eigenvalues(j) > threshold) ++k;
  if (k == n) return {e, Embedding::identity(n)};

  // Basis of the span, largest eigenvalue first.
  Matrix u(n, k);
  for (Index j = 0; j < k; ++j) u.col(j) = eig.eigenvectors.col(n - 1 - j);

  // The weighted operators project exactly; each state is renormalized
  // to unit trace with its lost mass moved into the prior, keeping
  // p_i rho_i invariant.
  std::vector<WeightedState> states;
  states.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    WeightedState s;
    Matrix rho = hermitian_part(u.adjoint() * e.rho(i) * u);
    const double mass = rho.trace().real();
    s.prior = e.prior(i) * mass;
    s.rho = rho / mass;
    if (e.pure(i)) {
      Vector v = u.adjoint() * *e.pure(i);
      s.pure = v / v.norm();
    }
    states.push_back(std::move(s));
  }
  return {Ensemble::trusted(k, std::move(states)), Embedding(std::move(u))};
}

}  // namespace qdetect

#include "qdetect/certify.hpp"

#include "qdetect/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qdetect {

namespace {

double negative_part(const Matrix& m) {
  return std::max(0.0, -min_eigenvalue(hermitian_part(m)));
}

}  // namespace

double prob_correct(const Ensemble& e, const Measurement& mmt) {
  if (mmt.operators.size() != e.size())
    throw ValidationError("prob_correct: operator count does not match "
                          "the number of states");
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (mmt.operators[i].rows() != e.dim() ||
        mmt.operators[i].cols() != e.dim())
      throw ValidationError("prob_correct: operator dimension mismatch");
    total += (e.weighted(i) * mmt.operators[i]).trace().real();
  }
  return total;
}

OptimalityReport check_optimality(const Ensemble& e, const Measurement& mmt,
                                  const Matrix& x, double check_tol) {
  if (check_tol <= 0.0)
    throw ValidationError("check_optimality: check_tol must be positive");
  if (x.rows() != e.dim() || x.cols() != e.dim())
    throw ValidationError("check_optimality: dual matrix dimension "
                          "mismatch");

  const Index n = e.dim();
  OptimalityReport report;
  report.tol = check_tol;
  report.p_correct = prob_correct(e, mmt);
  report.dual_objective = x.trace().real();
  report.gap = report.dual_objective - report.p_correct;

  double psd = 0.0;
  Matrix total = Matrix::Zero(n, n);
  Matrix lagrangian = Matrix::Zero(n, n);
  double feas = 0.0;
  double slack = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Matrix& op = mmt.operators[i];
    psd = std::max(psd, std::max(hermiticity_error(op), negative_part(op)));
    total += op;
    lagrangian += e.weighted(i) * op;
    const Matrix gap_block = x - e.weighted(i);
    feas = std::max(feas, negative_part(gap_block));
    slack = std::max(slack, max_abs(gap_block * op));
  }
  report.measurement_psd = {psd <= check_tol, psd};
  report.resolution = {max_abs(total - Matrix::Identity(n, n)) <= check_tol,
                       max_abs(total - Matrix::Identity(n, n))};
  report.dual_feasible = {feas <= check_tol, feas};
  report.slackness = {slack <= check_tol, slack};

  const double herm = hermiticity_error(lagrangian);
  report.lagrangian_hermitian = {herm <= check_tol, herm};

  const Matrix herm_lagrangian = hermitian_part(lagrangian);
  double dominance = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j)
    dominance = std::max(dominance,
                         negative_part(herm_lagrangian - e.weighted(j)));
  report.dual_dominance = {dominance <= check_tol, dominance};

  report.gap_check = {std::abs(report.gap) <= check_tol,
                      std::abs(report.gap)};

  report.optimal = report.measurement_psd.passed && report.resolution.passed &&
                   report.dual_feasible.passed && report.slackness.passed &&
                   report.lagrangian_hermitian.passed &&
                   report.dual_dominance.passed && report.gap_check.passed;
  return report;
}

OptimalityReport check_feasibility(const Ensemble& e, const Measurement& mmt,
                                   double check_tol) {
  if (check_tol <= 0.0)
    throw ValidationError("check_feasibility: check_tol must be positive");
  const Index n = e.dim();
  OptimalityReport report;
  report.tol = check_tol;
  report.p_correct = prob_correct(e, mmt);

  double psd = 0.0;
  Matrix total = Matrix::Zero(n, n);
  for (const Matrix& op : mmt.operators) {
    psd = std::max(psd, std::max(hermiticity_error(op), negative_part(op)));
    total += op;
  }
  const double res = max_abs(total - Matrix::Identity(n, n));
  report.measurement_psd = {psd <= check_tol, psd};
  report.resolution = {res <= check_tol, res};
  return report;
}

double helstrom_binary_pd(const Ensemble& e) {
  if (e.size() != 2)
    throw ValidationError("helstrom_binary_pd: exactly two states required");
  const Matrix delta = e.weighted(0) - e.weighted(1);
  const EigenDecomposition eig = hermitian_eig(hermitian_part(delta));
  return 0.5 * (1.0 + eig.eigenvalues.array().abs().sum());
}

}  // namespace qdetect

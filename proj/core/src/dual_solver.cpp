#include "qdetect/dual_solver.hpp"

#include "qdetect/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

namespace qdetect {

namespace {

// Orthonormal basis of Hermitian n x n matrices under the trace inner
// product: the diagonal units e_d e_d', then for each p < q the pair
// (e_p e_q' + e_q e_p')/sqrt(2) and i(e_p e_q' - e_q e_p')/sqrt(2).
// Each element is a sum of at most two scaled matrix units, which keeps
// gradient and Hessian assembly at a handful of flops per entry.
struct BasisTerm {
  Index row;
  Index col;
  Complex weight;
};

struct BasisElement {
  BasisTerm terms[2];
  int count;
};

std::vector<BasisElement> hermitian_basis(Index n) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<BasisElement> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  for (Index d = 0; d < n; ++d)
    basis.push_back({{{d, d, Complex(1.0, 0.0)}, {}}, 1});
  for (Index p = 0; p < n; ++p)
    for (Index q = p + 1; q < n; ++q) {
      basis.push_back({{{p, q, Complex(inv_sqrt2, 0.0)},
                        {q, p, Complex(inv_sqrt2, 0.0)}},
                       2});
      basis.push_back({{{p, q, Complex(0.0, inv_sqrt2)},
                        {q, p, Complex(0.0, -inv_sqrt2)}},
                       2});
    }
  return basis;
}

// Re tr(E_a G) for Hermitian G; tr(e_x e_y' G) = G(y, x).
double gradient_coord(const BasisElement& e, const Matrix& g) {
  Complex acc = 0.0;
  for (int u = 0; u < e.count; ++u)
    acc += e.terms[u].weight * g(e.terms[u].col, e.terms[u].row);
  return acc.real();
}

// Re tr(E_a M E_b M) with M Hermitian.
double hessian_entry(const BasisElement& a, const BasisElement& b,
                     const Matrix& m) {
  Complex acc = 0.0;
  for (int u = 0; u < a.count; ++u)
    for (int v = 0; v < b.count; ++v)
      acc += a.terms[u].weight * b.terms[v].weight *
             m(a.terms[u].col, b.terms[v].row) *
             m(b.terms[v].col, a.terms[u].row);
  return acc.real();
}

Matrix from_coords(const std::vector<BasisElement>& basis,
                   const RealVector& coords, Index n) {
  Matrix result = Matrix::Zero(n, n);
  for (Index a = 0; a < coords.size(); ++a) {
    const BasisElement& e = basis[static_cast<std::size_t>(a)];
    for (int u = 0; u < e.count; ++u)
      result(e.terms[u].row, e.terms[u].col) += coords(a) * e.terms[u].weight;
  }
  return result;
}

std::vector<Matrix> hermitized(const std::vector<Matrix>& weighted, Index n) {
  std::vector<Matrix> out;
  out.reserve(weighted.size());
  for (const Matrix& w : weighted) {
    if (w.rows() != n || w.cols() != n)
      throw ValidationError("solve_dual: weighted state dimension mismatch");
    out.push_back(hermitian_part(w));
  }
  return out;
}

// Slack blocks S_i = X - rho'_i with their Cholesky factors.
struct SlackSet {
  std::vector<Eigen::LLT<Matrix>> factors;
  bool ok = false;
};

SlackSet factor_slacks(const Matrix& x, const std::vector<Matrix>& weighted) {
  SlackSet s;
  s.factors.reserve(weighted.size());
  for (const Matrix& w : weighted) {
    s.factors.emplace_back(Matrix(x - w));
    if (s.factors.back().info() != Eigen::Success) return s;
  }
  s.ok = true;
  return s;
}

double min_slack_eig(const Matrix& x, const std::vector<Matrix>& weighted) {
  double lo = std::numeric_limits<double>::infinity();
  for (const Matrix& w : weighted)
    lo = std::min(lo, min_eigenvalue(hermitian_part(x - w)));
  return lo;
}

// Strict feasibility margin demanded of every accepted iterate. The log
// barrier is undefined past the boundary, so a positive floor keeps the
// next factorization safe.
constexpr double kFeasFloor = 1e-14;

bool strictly_feasible(const Matrix& x, const std::vector<Matrix>& weighted) {
  return min_slack_eig(x, weighted) > kFeasFloor;
}

double log_det_from_llt(const Eigen::LLT<Matrix>& llt) {
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Index k = 0; k < l.rows(); ++k) acc += std::log(l(k, k).real());
  return 2.0 * acc;
}

struct CenterOutcome {
  double decrement = 0.0;
  int iterations = 0;
};

// Newton-center the barrier objective at fixed t down to the target
// decrement. Far from the minimizer (decrement > 1/4) steps are damped
// by Armijo backtracking. Inside the quadratic convergence region the
// full step is taken with only a feasibility cap: at t around 1e9 the
// objective is too large for its float representation to resolve the
// decrease Armijo wants to see, and the decrement itself is the better
// progress measure there. A decrement that stops shrinking below 1e-4
// is accepted as converged for the same reason.
CenterOutcome center(Matrix& x, double t, const std::vector<Matrix>& weighted,
                     const std::vector<BasisElement>& basis,
                     const SolverOptions& opts, double target) {
  const Index n = x.rows();
  const Index dof = static_cast<Index>(basis.size());
  const std::size_t m = weighted.size();

  double prev_decrement = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int it = 0; it < opts.max_newton_iters; ++it) {
    SlackSet slacks = factor_slacks(x, weighted);
    if (!slacks.ok)
      throw SolverError("solve_dual: iterate left the feasible cone");

    std::vector<Matrix> inverses;
    inverses.reserve(m);
    const Matrix eye = Matrix::Identity(n, n);
    for (const auto& llt : slacks.factors) inverses.push_back(llt.solve(eye));

    Matrix grad_matrix = t * eye;
    for (const Matrix& inv : inverses) grad_matrix -= inv;

    RealVector grad(dof);
    for (Index a = 0; a < dof; ++a)
      grad(a) = gradient_coord(basis[static_cast<std::size_t>(a)], grad_matrix);

    RealMatrix hess = RealMatrix::Zero(dof, dof);
    for (const Matrix& inv : inverses)
      for (Index a = 0; a < dof; ++a)
        for (Index b = a; b < dof; ++b)
          hess(a, b) += hessian_entry(basis[static_cast<std::size_t>(a)],
                                      basis[static_cast<std::size_t>(b)], inv);
    hess.triangularView<Eigen::StrictlyLower>() = hess.transpose();

    Eigen::LLT<RealMatrix> hess_llt(hess);
    RealVector direction;
    if (hess_llt.info() == Eigen::Success) {
      direction = hess_llt.solve(-grad);
    } else {
      Eigen::LDLT<RealMatrix> hess_ldlt(hess);
      if (hess_ldlt.info() != Eigen::Success)
        throw SolverError("solve_dual: singular Hessian near the boundary");
      direction = hess_ldlt.solve(-grad);
    }

    const double decrement_sq = direction.dot(hess * direction);
    const double decrement = std::sqrt(std::max(decrement_sq, 0.0));

    if (opts.verbosity >= 2 && opts.log)
      *opts.log << "  newton " << it << ": decrement=" << decrement << "\n";

    if (decrement <= target) return {decrement, it};
    if (!std::isfinite(decrement)) {
      if (prev_decrement <= 1e-3) return {prev_decrement, it};
      throw SolverError("solve_dual: Newton decrement lost to round-off");
    }

    const Matrix delta = from_coords(basis, direction, n);

    // Cap the step so every slack block stays PD: with S = L L' the
    // smallest eigenvalue of L^{-1} Delta L^{-*} bounds how far the
    // block can move before hitting the boundary.
    double step = 1.0;
    for (const auto& llt : slacks.factors) {
      const Matrix half = llt.matrixL().solve(delta);
      const Matrix scaled =
          llt.matrixL().solve(Matrix(half.adjoint())).adjoint();
      const double lo = min_eigenvalue(hermitian_part(scaled));
      if (lo < 0.0) step = std::min(step, -0.99 / lo);
    }

    if (decrement > 0.25) {
      double f0 = t * x.trace().real();
      for (const auto& llt : slacks.factors) f0 -= log_det_from_llt(llt);
      const double slope = grad.dot(direction);
      while (true) {
        const Matrix candidate = hermitian_part(x + step * delta);
        if (strictly_feasible(candidate, weighted)) {
          const double f1 = barrier_value(candidate, t, weighted);
          if (f1 <= f0 + opts.ls_acceptance * step * slope) {
            x = candidate;
            break;
          }
        }
        step *= opts.ls_shrink;
        if (step < 1e-20)
          throw SolverError("solve_dual: line search failed to make progress");
      }
      prev_decrement = decrement;
      stalled = 0;
    } else {
      while (true) {
        const Matrix candidate = hermitian_part(x + step * delta);
        if (strictly_feasible(candidate, weighted)) {
          x = candidate;
          break;
        }
        step *= opts.ls_shrink;
        if (step < 1e-20)
          throw SolverError("solve_dual: feasibility backtracking failed");
      }
      if (decrement <= 1e-4 && decrement >= 0.5 * prev_decrement) {
        if (++stalled >= 2) return {decrement, it + 1};
      } else {
        stalled = 0;
      }
      prev_decrement = decrement;
    }
  }

  // The decrement target was not reached within the iteration budget.
  // A modest decrement still certifies a usable gap bound; anything
  // larger means the solve genuinely failed.
  SlackSet slacks = factor_slacks(x, weighted);
  if (slacks.ok) {
    const NewtonStep last = newton_step(x, t, weighted);
    if (last.decrement <= 0.1) return {last.decrement, opts.max_newton_iters};
  }
  throw SolverError("solve_dual: Newton iteration limit exceeded");
}

}  // namespace

double DualCertificate::min_slack(const std::vector<Matrix>& weighted) const {
  return min_slack_eig(x, weighted);
}

Matrix initial_point(const std::vector<Matrix>& weighted, Index n) {
  double top = 0.0;
  for (const Matrix& w : weighted) {
    const EigenDecomposition eig = hermitian_eig(hermitian_part(w), 1e-6);
    top = std::max(top, eig.eigenvalues(n - 1));
  }
  return (1.0 + top) * Matrix::Identity(n, n);
}

Matrix initial_point(const Ensemble& e) {
  return initial_point(e.weighted(), e.dim());
}

double barrier_value(const Matrix& x, double t,
                     const std::vector<Matrix>& weighted) {
  double value = t * x.trace().real();
  for (const Matrix& w : weighted) {
    Eigen::LLT<Matrix> llt(Matrix(x - w));
    if (llt.info() != Eigen::Success ||
        min_eigenvalue(hermitian_part(x - w)) <= 0.0)
      throw SolverError("barrier_value: point is not strictly feasible");
    value -= log_det_from_llt(llt);
  }
  return value;
}

Matrix barrier_gradient(const Matrix& x, double t,
                        const std::vector<Matrix>& weighted) {
  const Index n = x.rows();
  Matrix grad = t * Matrix::Identity(n, n);
  for (const Matrix& w : weighted) {
    Eigen::LLT<Matrix> llt(Matrix(x - w));
    if (llt.info() != Eigen::Success)
      throw SolverError("barrier_gradient: point is not strictly feasible");
    grad -= llt.solve(Matrix::Identity(n, n));
  }
  return hermitian_part(grad);
}

Matrix barrier_hessian_apply(const Matrix& x,
                             const std::vector<Matrix>& weighted,
                             const Matrix& d) {
  const Index n = x.rows();
  Matrix result = Matrix::Zero(n, n);
  for (const Matrix& w : weighted) {
    Eigen::LLT<Matrix> llt(Matrix(x - w));
    if (llt.info() != Eigen::Success)
      throw SolverError("barrier_hessian_apply: point is not strictly feasible");
    const Matrix inv = llt.solve(Matrix::Identity(n, n));
    result += inv * d * inv;
  }
  return hermitian_part(result);
}

NewtonStep newton_step(const Matrix& x, double t,
                       const std::vector<Matrix>& weighted) {
  const Index n = x.rows();
  const std::vector<Matrix> states = hermitized(weighted, n);
  const std::vector<BasisElement> basis = hermitian_basis(n);
  const Index dof = static_cast<Index>(basis.size());

  const Matrix grad_matrix = barrier_gradient(x, t, states);
  RealVector grad(dof);
  for (Index a = 0; a < dof; ++a)
    grad(a) = gradient_coord(basis[static_cast<std::size_t>(a)], grad_matrix);

  RealMatrix hess = RealMatrix::Zero(dof, dof);
  for (const Matrix& w : states) {
    Eigen::LLT<Matrix> llt(Matrix(x - w));
    if (llt.info() != Eigen::Success)
      throw SolverError("newton_step: point is not strictly feasible");
    const Matrix inv = llt.solve(Matrix::Identity(n, n));
    for (Index a = 0; a < dof; ++a)
      for (Index b = a; b < dof; ++b)
        hess(a, b) += hessian_entry(basis[static_cast<std::size_t>(a)],
                                    basis[static_cast<std::size_t>(b)], inv);
  }
  hess.triangularView<Eigen::StrictlyLower>() = hess.transpose();

  Eigen::LDLT<RealMatrix> solver(hess);
  if (solver.info() != Eigen::Success)
    throw SolverError("newton_step: Hessian assembly is singular");
  const RealVector direction = solver.solve(-grad);
  const double decrement_sq = direction.dot(hess * direction);
  return {from_coords(basis, direction, n),
          std::sqrt(std::max(decrement_sq, 0.0))};
}

NewtonStep newton_step(const Matrix& x, double t, const Ensemble& e) {
  return newton_step(x, t, e.weighted());
}

std::pair<DualCertificate, SolverTrace> solve_dual(
    const std::vector<Matrix>& weighted, Index n, const SolverOptions& opts) {
  if (weighted.empty())
    throw ValidationError("solve_dual: need at least one state");
  if (!(opts.gap_tol > 0.0) || !(opts.barrier_growth > 1.0) ||
      !(opts.ls_shrink > 0.0 && opts.ls_shrink < 1.0) ||
      !(opts.ls_acceptance > 0.0 && opts.ls_acceptance < 0.5))
    throw ValidationError("solve_dual: options out of range");

  const std::vector<Matrix> states = hermitized(weighted, n);
  const std::vector<BasisElement> basis = hermitian_basis(n);
  const double nu = static_cast<double>(states.size()) * static_cast<double>(n);
  // Ending past m*n/gap_tol leaves room for the approximate-centering
  // term in the gap bound below.
  const double t_target = 2.0 * nu / opts.gap_tol;

  Matrix x = initial_point(states, n);
  SolverTrace trace;
  double t = opts.t_initial;

  while (true) {
    const bool final_stage = t >= t_target * (1.0 - 1e-12);
    const double target =
        final_stage ? opts.final_centering_tol : opts.centering_tol;
    const CenterOutcome outcome = center(x, t, states, basis, opts, target);

    StageRecord record;
    record.t = t;
    record.objective = x.trace().real();
    record.newton_iters = outcome.iterations;
    record.decrement = outcome.decrement;
    record.min_slack = min_slack_eig(x, states);
    trace.stages.push_back(record);
    trace.total_newton_iters += outcome.iterations;
    if (opts.verbosity >= 1 && opts.log)
      *opts.log << "stage t=" << record.t << " tr(X)=" << record.objective
                << " newton=" << record.newton_iters
                << " decrement=" << record.decrement
                << " min_slack=" << record.min_slack << "\n";

    if (final_stage) {
      // Suboptimality of an approximately centered point: nu/t from the
      // central path plus the decrement-controlled excess.
      const double lam = std::min(outcome.decrement, 0.9);
      trace.gap_bound = (nu + lam * std::sqrt(nu) / (1.0 - lam)) / t;
      break;
    }
    t = std::min(t * opts.barrier_growth, t_target);
  }

  DualCertificate cert;
  cert.x = hermitian_part(x);
  cert.objective = x.trace().real();
  cert.gap_bound = trace.gap_bound;
  return {std::move(cert), std::move(trace)};
}

std::pair<DualCertificate, SolverTrace> solve_dual(const Ensemble& e,
                                                   const SolverOptions& opts) {
  return solve_dual(e.weighted(), e.dim(), opts);
}

}  // namespace qdetect

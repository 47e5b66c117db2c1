#pragma once

#include "qdetect/ensemble.hpp"

#include <iosfwd>
#include <vector>

namespace qdetect {

struct SolverOptions {
  double gap_tol = 1e-8;      // target bound on tr(X) minus the true optimum
  double t_initial = 1.0;
  double barrier_growth = 10.0;
  int max_newton_iters = 200; // per barrier stage
  double ls_shrink = 0.5;
  double ls_acceptance = 0.01;
  double centering_tol = 0.25;        // Newton decrement target between stages
  double final_centering_tol = 1e-7;  // and at the last stage
  int verbosity = 0;                  // 0 silent, 1 stage lines, 2 newton lines
  std::ostream* log = nullptr;
};

/// One barrier stage: centering at a fixed barrier parameter t.
struct StageRecord {
  double t = 0.0;
  double objective = 0.0;  // tr(X) after centering
  int newton_iters = 0;
  double decrement = 0.0;  // Newton decrement at exit
  double min_slack = 0.0;  // smallest eigenvalue over all X - rho'_i
};

struct SolverTrace {
  std::vector<StageRecord> stages;
  int total_newton_iters = 0;
  double gap_bound = 0.0;  // certified distance of tr(X) from the optimum
};

/// Feasible dual point: X - rho'_i is PSD for every i, and tr(X) is
/// within gap_bound of the dual optimum.
struct DualCertificate {
  Matrix x;
  double objective = 0.0;  // tr(X)
  double gap_bound = 0.0;

  /// Smallest eigenvalue over all slack blocks X - rho'_i.
  double min_slack(const std::vector<Matrix>& weighted) const;
};

/// Strictly feasible start (1 + max_i lambda_max(rho'_i)) I.
Matrix initial_point(const std::vector<Matrix>& weighted, Index n);
Matrix initial_point(const Ensemble& e);

/// Barrier objective t tr(X) - sum_i log det(X - rho'_i). Throws
/// SolverError when some slack block is not positive definite.
double barrier_value(const Matrix& x, double t,
                     const std::vector<Matrix>& weighted);

/// Barrier gradient t I - sum_i (X - rho'_i)^{-1}, a Hermitian matrix.
Matrix barrier_gradient(const Matrix& x, double t,
                        const std::vector<Matrix>& weighted);

/// Barrier Hessian applied to a Hermitian direction:
/// sum_i (X - rho'_i)^{-1} D (X - rho'_i)^{-1}.
Matrix barrier_hessian_apply(const Matrix& x,
                             const std::vector<Matrix>& weighted,
                             const Matrix& d);

struct NewtonStep {
  Matrix direction;        // Hermitian
  double decrement = 0.0;  // sqrt(d^T H d) over the real parameterization
};

/// Newton step of the barrier subproblem at parameter t, assembled over
/// the n^2 real degrees of freedom of Hermitian X.
NewtonStep newton_step(const Matrix& x, double t,
                       const std::vector<Matrix>& weighted);
NewtonStep newton_step(const Matrix& x, double t, const Ensemble& e);

/// Minimize tr(X) subject to X >= rho'_i by path following: damped
/// Newton centering along increasing barrier parameters, starting from
/// initial_point. The result satisfies the gap_tol suboptimality bound.
std::pair<DualCertificate, SolverTrace> solve_dual(
    const std::vector<Matrix>& weighted, Index n, const SolverOptions& opts = {});
std::pair<DualCertificate, SolverTrace> solve_dual(const Ensemble& e,
                                                   const SolverOptions& opts = {});

}  // namespace qdetect

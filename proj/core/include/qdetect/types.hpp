#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace qdetect {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Validation tolerances for ensemble input.
struct Tolerances {
  double herm_tol = 1e-8;
  double psd_tol = 1e-8;
  double trace_tol = 1e-8;
  double prior_tol = 1e-8;
};

/// Malformed input document.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input violates a mathematical invariant (non-PSD state, bad priors, ...).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The barrier solve could not make progress.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Measurement recovery from the dual solution failed.
class RecoveryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Largest entrywise absolute value, 0 for empty matrices.
double max_abs(const Matrix& m);

/// Distance from Hermitian symmetry, the max-norm of M - M^dagger.
double hermiticity_error(const Matrix& m);

/// Hermitian part (M + M^dagger) / 2.
Matrix hermitian_part(const Matrix& m);

/// True when no entry is NaN or infinite.
bool all_finite(const Matrix& m);

}  // namespace qdetect

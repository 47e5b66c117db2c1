#include "qdetect/linalg.hpp"

#include <cmath>
#include <string>

namespace qdetect {

EigenDecomposition hermitian_eig(const Matrix& m, double herm_tol) {
  if (m.rows() != m.cols())
    throw ValidationError("hermitian_eig: matrix is not square");
  if (!all_finite(m))
    throw ValidationError("hermitian_eig: matrix has non-finite entries");
  const double herm_err = hermiticity_error(m);
  if (herm_err > herm_tol)
    throw ValidationError("hermitian_eig: matrix deviates from Hermitian by " +
                          std::to_string(herm_err));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw SolverError("hermitian_eig: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw SolverError("min_eigenvalue: eigensolver failed to converge");
  return solver.eigenvalues()(0);
}

bool is_psd(const Matrix& m, double tol, double herm_tol) {
  const EigenDecomposition eig = hermitian_eig(m, herm_tol);
  return eig.eigenvalues(0) >= -tol;
}

Matrix inv_sqrt_psd(const Matrix& m, double psd_tol) {
  const EigenDecomposition eig = hermitian_eig(m);
  if (eig.eigenvalues(0) <= psd_tol)
    throw ValidationError(
        "inv_sqrt_psd: matrix is not positive definite (smallest eigenvalue " +
        std::to_string(eig.eigenvalues(0)) + ")");
  const RealVector scaled = eig.eigenvalues.array().rsqrt().matrix();
  return eig.eigenvectors * scaled.asDiagonal() * eig.eigenvectors.adjoint();
}

Vector mvec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace qdetect

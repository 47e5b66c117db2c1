#pragma once

#include "qdetect/types.hpp"

namespace qdetect {

/// Spectral decomposition of a Hermitian matrix.
struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, column k pairs with eigenvalues[k]
};

/// Diagonalize a Hermitian matrix. Rejects inputs farther than herm_tol
/// from Hermitian; throws SolverError if the iteration fails to converge.
EigenDecomposition hermitian_eig(const Matrix& m, double herm_tol = 1e-8);

/// Smallest eigenvalue of a Hermitian matrix (no hermiticity check).
double min_eigenvalue(const Matrix& m);

/// True iff the smallest eigenvalue is >= -tol.
bool is_psd(const Matrix& m, double tol, double herm_tol = 1e-8);

/// Inverse square root of a positive definite matrix, the unique PSD
/// Hermitian R with R * R = M^{-1}. Throws ValidationError when the
/// smallest eigenvalue is <= psd_tol.
Matrix inv_sqrt_psd(const Matrix& m, double psd_tol = 1e-8);

/// Column-stacked vector of length rows * cols.
Vector mvec(const Matrix& m);

}  // namespace qdetect

#include "qdetect/types.hpp"

#include <cmath>

namespace qdetect {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

Matrix hermitian_part(const Matrix& m) {
  return 0.5 * (m + m.adjoint());
}

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  return true;
}

}  // namespace qdetect

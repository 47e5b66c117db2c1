#include "qdetect/lsm.hpp"

#include "qdetect/linalg.hpp"

#include <cmath>
#include <sstream>

namespace qdetect {

PureEnsembleView pure_view(const Ensemble& e, double rank_tol) {
  const Index n = e.dim();
  PureEnsembleView view;
  view.phi.reserve(e.size());
  view.priors.reserve(e.size());
  view.psi.resize(n, static_cast<Index>(e.size()));

  for (std::size_t i = 0; i < e.size(); ++i) {
    Vector phi;
    if (e.pure(i)) {
      phi = *e.pure(i);
    } else {
      const EigenDecomposition eig = hermitian_eig(e.rho(i));
      const double top = eig.eigenvalues(n - 1);
      if (n > 1 && eig.eigenvalues(n - 2) > rank_tol * top) {
        std::ostringstream msg;
        msg << "pure_view: state " << i << " has rank above one "
            << "(second eigenvalue " << eig.eigenvalues(n - 2) << ")";
        throw ValidationError(msg.str());
      }
      phi = eig.eigenvectors.col(n - 1);
    }
    view.phi.push_back(phi);
    view.priors.push_back(e.prior(i));
    view.psi.col(static_cast<Index>(i)) = std::sqrt(e.prior(i)) * phi;
  }
  return view;
}

std::vector<Vector> lsm_vectors(const PureEnsembleView& view, double psd_tol) {
  const Matrix frame = view.psi * view.psi.adjoint();
  const Matrix whitener = inv_sqrt_psd(frame, psd_tol);
  std::vector<Vector> chi;
  chi.reserve(view.phi.size());
  for (Index i = 0; i < view.psi.cols(); ++i)
    chi.push_back(whitener * view.psi.col(i));
  return chi;
}

Measurement lsm_measurement(const PureEnsembleView& view, double psd_tol) {
  Measurement mmt;
  mmt.vectors = lsm_vectors(view, psd_tol);
  for (const Vector& chi : *mmt.vectors)
    mmt.operators.push_back(chi * chi.adjoint());
  return mmt;
}

double lsm_prob_correct(const PureEnsembleView& view, double psd_tol) {
  const std::vector<Vector> chi = lsm_vectors(view, psd_tol);
  double total = 0.0;
  for (std::size_t i = 0; i < view.phi.size(); ++i)
    total += view.priors[i] * std::norm(chi[i].dot(view.phi[i]));
  return total;
}

}  // namespace qdetect

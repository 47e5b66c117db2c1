#include "qdetect/generate.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace qdetect {

namespace {

// Box-Muller over explicitly constructed uniforms. std::normal_distribution
// is implementation-defined, which would break the byte-identical-output
// promise across standard libraries.
class Gaussian {
public:
  explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform in (0, 1], so log() above stays finite.
  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  std::uint64_t integer_below(std::uint64_t bound) {
    return engine_() % bound;
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

Vector random_unit_vector(Gaussian& g, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = g();
    const double im = g();
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

Matrix random_density(Gaussian& g, Index n, Index rank) {
  Matrix factor(n, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = g();
      const double im = g();
      factor(i, j) = Complex(re, im);
    }
  Matrix rho = factor * factor.adjoint();
  rho = hermitian_part(rho / rho.trace().real());
  return rho;
}

}  // namespace

Ensemble generate_ensemble(StateKind kind, Index n, std::size_t m,
                           std::uint64_t seed, bool random_ranks) {
  if (n < 1) throw ValidationError("generate_ensemble: dimension must be >= 1");
  if (m < 1) throw ValidationError("generate_ensemble: need at least one state");
  Gaussian g(seed);

  std::vector<WeightedState> states(m);
  for (WeightedState& s : states) {
    if (kind == StateKind::pure) {
      Vector v = random_unit_vector(g, n);
      s.rho = v * v.adjoint();
      s.pure = std::move(v);
    } else {
      const Index rank =
          random_ranks ? static_cast<Index>(g.integer_below(
                             static_cast<std::uint64_t>(n)) + 1)
                       : n;
      s.rho = random_density(g, n, rank);
    }
  }

  // Exponential spacings give a uniform draw from the simplex.
  double total = 0.0;
  for (WeightedState& s : states) {
    s.prior = -std::log(g.uniform());
    total += s.prior;
  }
  for (WeightedState& s : states) s.prior /= total;

  return Ensemble::create(n, std::move(states));
}

}  // namespace qdetect

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdetect/certify.hpp"
#include "qdetect/linalg.hpp"
#include "qdetect/recovery.hpp"

#include <cmath>
#include <vector>

using namespace qdetect;

namespace {

Ensemble golden_triple() {
  const double s = 1.0 / std::sqrt(2.0);
  Vector zero(2), plus(2), one(2);
  zero << 1, 0;
  plus << s, s;
  one << 0, 1;
  std::vector<WeightedState> states;
  for (const auto& [prior, phi] :
       {std::pair{0.1, zero}, std::pair{0.6, plus}, std::pair{0.3, one}}) {
    WeightedState ws;
    ws.prior = prior;
    ws.rho = phi * phi.adjoint();
    ws.pure = phi;
    states.push_back(ws);
  }
  return Ensemble::create(2, states);
}

Ensemble pure_pair(const Vector& a, const Vector& b, double pa, double pb) {
  std::vector<WeightedState> states;
  for (const auto& [prior, phi] : {std::pair{pa, a}, std::pair{pb, b}}) {
    WeightedState ws;
    ws.prior = prior;
    ws.rho = phi * phi.adjoint();
    ws.pure = phi;
    states.push_back(ws);
  }
  return Ensemble::create(a.size(), states);
}

// The known optimum for the golden ensemble.
const double kGoldenPd = 0.45 + 3.0 / (4.0 * std::sqrt(5.0));

Measurement golden_measurement() {
  const double c1 = 0.85065080835203993;  // sqrt((5 + sqrt(5)) / 10)
  const double c2 = 0.52573111211913359;  // sqrt((5 - sqrt(5)) / 10)
  Vector mu2(2), mu3(2);
  mu2 << c1, c2;
  mu3 << c2, -c1;
  Measurement mmt;
  mmt.operators = {Matrix::Zero(2, 2), mu2 * mu2.adjoint(),
                   mu3 * mu3.adjoint()};
  mmt.vectors = {Vector(Vector::Zero(2)), mu2, mu3};
  return mmt;
}

}  // namespace

TEST_CASE("prob_correct evaluates the decision probability") {
  Vector zero(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  const Ensemble e = pure_pair(zero, one, 0.5, 0.5);

  Measurement projective;
  projective.operators = {zero * zero.adjoint(), one * one.adjoint()};
  CHECK(prob_correct(e, projective) == doctest::Approx(1.0));

  Measurement swapped;
  swapped.operators = {one * one.adjoint(), zero * zero.adjoint()};
  CHECK(prob_correct(e, swapped) == doctest::Approx(0.0));

  Measurement mismatched;
  mismatched.operators = {Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(prob_correct(e, mismatched), ValidationError);
}

TEST_CASE("golden measurement certifies against the known dual matrix") {
  const Ensemble e = golden_triple();
  const Measurement mmt = golden_measurement();
  CHECK(prob_correct(e, mmt) == doctest::Approx(kGoldenPd).epsilon(1e-12));

  Matrix x(2, 2);
  x << 0.35124611909703762, 0.21708203918063215, 0.21708203918063215,
      0.4341640791945976;
  const OptimalityReport report = check_optimality(e, mmt, x);
  CHECK(report.optimal);
  CHECK(report.p_correct == doctest::Approx(kGoldenPd).epsilon(1e-12));
  CHECK(report.gap == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(report.measurement_psd.passed);
  CHECK(report.resolution.passed);
  CHECK(report.dual_feasible.passed);
  CHECK(report.slackness.passed);
  CHECK(report.lagrangian_hermitian.passed);
  CHECK(report.dual_dominance.passed);
  CHECK(report.gap_check.passed);
  CHECK(report.tol == 1e-6);
}

TEST_CASE("uniform measurement is feasible but not optimal") {
  const Ensemble e = golden_triple();
  Measurement uniform;
  for (int i = 0; i < 3; ++i)
    uniform.operators.push_back(Matrix::Identity(2, 2) / 3.0);

  Matrix x(2, 2);
  x << 0.35124611909703762, 0.21708203918063215, 0.21708203918063215,
      0.4341640791945976;
  const OptimalityReport report = check_optimality(e, uniform, x);
  CHECK(report.measurement_psd.passed);
  CHECK(report.resolution.passed);
  CHECK(report.dual_feasible.passed);
  CHECK_FALSE(report.slackness.passed);
  CHECK_FALSE(report.gap_check.passed);
  CHECK_FALSE(report.optimal);
  CHECK(report.p_correct == doctest::Approx(1.0 / 3.0));

  const OptimalityReport feas = check_feasibility(e, uniform);
  CHECK(feas.measurement_psd.passed);
  CHECK(feas.resolution.passed);
  CHECK(feas.p_correct == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("a perturbed dual matrix loses feasibility") {
  const Ensemble e = golden_triple();
  const Measurement mmt = golden_measurement();
  Matrix x(2, 2);
  x << 0.35124611909703762, 0.21708203918063215, 0.21708203918063215,
      0.4341640791945976;
  x(1, 1) -= 0.01;
  const OptimalityReport report = check_optimality(e, mmt, x);
  CHECK_FALSE(report.dual_feasible.passed);
  CHECK_FALSE(report.optimal);
  CHECK(report.dual_feasible.magnitude > 1e-4);
}

TEST_CASE("condition magnitudes report the size of the violation") {
  Vector zero(2), one(2);
  zero << 1, 0;
  one << 0, 1;
  const Ensemble e = pure_pair(zero, one, 0.5, 0.5);

  Measurement lopsided;
  lopsided.operators = {1.2 * (zero * zero.adjoint()),
                        one * one.adjoint()};
  const OptimalityReport report =
      check_optimality(e, lopsided, Matrix::Identity(2, 2) * 0.5);
  CHECK_FALSE(report.resolution.passed);
  CHECK(report.resolution.magnitude == doctest::Approx(0.2));
}

TEST_CASE("helstrom closed form") {
  Vector zero(2), one(2), plus(2);
  const double s = 1.0 / std::sqrt(2.0);
  zero << 1, 0;
  one << 0, 1;
  plus << s, s;

  CHECK(helstrom_binary_pd(pure_pair(zero, one, 0.5, 0.5)) ==
        doctest::Approx(1.0));
  CHECK(helstrom_binary_pd(pure_pair(zero, plus, 0.5, 0.5)) ==
        doctest::Approx(0.5 * (1.0 + s)).epsilon(1e-14));
  CHECK(helstrom_binary_pd(pure_pair(zero, zero, 0.7, 0.3)) ==
        doctest::Approx(0.7));
  CHECK_THROWS_AS(helstrom_binary_pd(golden_triple()), ValidationError);
}

TEST_CASE("argument validation") {
  const Ensemble e = golden_triple();
  const Measurement mmt = golden_measurement();
  CHECK_THROWS_AS(check_optimality(e, mmt, Matrix::Identity(3, 3)),
                  ValidationError);
  CHECK_THROWS_AS(check_optimality(e, mmt, Matrix::Identity(2, 2), 0.0),
                  ValidationError);
  CHECK_THROWS_AS(check_feasibility(e, mmt, -1.0), ValidationError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdetect/generate.hpp"
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

Matrix projector(double x, double y) {
  Vector v(2);
  v << x, y;
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("golden ensemble null spaces and coefficients") {
  const Ensemble e = golden_triple();
  const auto [cert, trace] = solve_dual(e);

  const NullSpaceBundle bundle = null_space_basis(cert, e, 1e-6);
  CHECK(bundle.count(0) == 0);
  CHECK(bundle.count(1) == 1);
  CHECK(bundle.count(2) == 1);
  REQUIRE(bundle.total_columns() == 2);

  // Null directions up to sign, golden-ratio components.
  const double c1 = 0.85065080835204;  // sqrt((5 + sqrt(5)) / 10)
  const double c2 = 0.52573111211913;  // sqrt((5 - sqrt(5)) / 10)
  const Matrix p2 = bundle.vectors[1][0] * bundle.vectors[1][0].adjoint();
  const Matrix p3 = bundle.vectors[2][0] * bundle.vectors[2][0].adjoint();
  CHECK(max_abs(p2 - projector(c1, c2)) < 1e-5);
  CHECK(max_abs(p3 - projector(c2, -c1)) < 1e-5);

  const CoefficientSystem sys = assemble_system(bundle, 2);
  REQUIRE(sys.y.rows() == 8);
  REQUIRE(sys.y.cols() == 2);
  REQUIRE(sys.e.size() == 8);
  CHECK(sys.e(0) == 1.0);
  CHECK(sys.e(3) == 1.0);
  CHECK(sys.e.tail(4).cwiseAbs().maxCoeff() == 0.0);

  RecoveryOptions opts;
  const RealVector a = solve_coefficients(sys, opts);
  REQUIRE(a.size() == 2);
  CHECK(std::abs(a(0) - 1.0) < 1e-5);
  CHECK(std::abs(a(1) - 1.0) < 1e-5);
}

TEST_CASE("recover_measurement returns rank-one factors on the golden case") {
  const Ensemble e = golden_triple();
  const auto [cert, trace] = solve_dual(e);
  const RecoveryResult res = recover_measurement(cert, e);

  REQUIRE(res.measurement.operators.size() == 3);
  CHECK(res.resolution_error <= 1e-6);
  CHECK(res.rank_tol_used == 1e-6);
  REQUIRE(res.measurement.vectors.has_value());
  CHECK(res.measurement.vectors->size() == 3);
  CHECK((*res.measurement.vectors)[0].norm() == 0.0);
  CHECK(max_abs(res.measurement.operators[0]) == 0.0);

  Matrix total = Matrix::Zero(2, 2);
  for (const Matrix& op : res.measurement.operators) {
    total += op;
    CHECK(min_eigenvalue(hermitian_part(op)) > -1e-12);
  }
  CHECK(max_abs(total - Matrix::Identity(2, 2)) <= 1e-6);

  // Factors reproduce the operators.
  for (std::size_t i = 0; i < 3; ++i) {
    const Vector& mu = (*res.measurement.vectors)[i];
    CHECK(max_abs(res.measurement.operators[i] - mu * mu.adjoint()) < 1e-12);
  }
}

TEST_CASE("assembled system reproduces the printed linear system") {
  // Null vectors as printed for the golden ensemble, three decimals.
  NullSpaceBundle bundle;
  bundle.vectors.resize(3);
  Vector q1(2), q2(2), q3(2);
  q1 << -0.833, 0.554;
  q2 << 0.850, 0.527;
  q3 << -0.525, 0.851;
  bundle.vectors[0].push_back(q1);
  bundle.vectors[1].push_back(q2);
  bundle.vectors[2].push_back(q3);

  const CoefficientSystem sys = assemble_system(bundle, 2);
  RealMatrix printed(4, 3);
  printed << 0.693, 0.722, 0.276,
            -0.461, 0.448, -0.447,
            -0.461, 0.448, -0.447,
             0.306, 0.278, 0.724;
  CHECK((sys.y.topRows(4) - printed).cwiseAbs().maxCoeff() < 2e-3);
  CHECK(sys.y.bottomRows(4).cwiseAbs().maxCoeff() == 0.0);

  // Least squares over these three-decimal inputs lands on the printed
  // coefficients.
  RecoveryOptions opts;
  opts.coeff_tol = 0.1;
  const RealVector a = solve_coefficients(sys, opts);
  REQUIRE(a.size() == 3);
  CHECK(std::abs(a(0) - 0.007) < 2e-3);
  CHECK(std::abs(a(1) - 0.999) < 2e-3);
  CHECK(std::abs(a(2) - 0.994) < 2e-3);
}

TEST_CASE("least-squares sign handling") {
  SUBCASE("small negatives are clamped to zero") {
    CoefficientSystem sys;
    sys.y.resize(2, 2);
    sys.y << 1.0, 1.0, 0.0, 1e-3;
    sys.e.resize(2);
    sys.e << 1.0, -5e-10;
    RecoveryOptions opts;
    const RealVector a = solve_coefficients(sys, opts);
    CHECK(a(1) == 0.0);
    CHECK(a(0) > 0.9);
  }
  SUBCASE("large negatives are an error") {
    CoefficientSystem sys;
    sys.y.resize(2, 2);
    sys.y << 1.0, 1.0, 0.0, 1e-3;
    sys.e.resize(2);
    sys.e << 1.0, -5e-3;
    RecoveryOptions opts;
    CHECK_THROWS_AS(solve_coefficients(sys, opts), RecoveryError);
  }
}

TEST_CASE("degenerate columns fall back to the residual LP") {
  CoefficientSystem sys;
  sys.y.resize(1, 2);
  sys.y << 1.0, 1.0;
  sys.e.resize(1);
  sys.e << 1.0;
  RecoveryOptions opts;
  const RealVector a = solve_coefficients(sys, opts);
  REQUIRE(a.size() == 2);
  CHECK(a.minCoeff() >= 0.0);
  CHECK(std::abs(a.sum() - 1.0) <= 1e-9);
}

TEST_CASE("duplicated states route through the LP and still resolve") {
  const double s = 1.0 / std::sqrt(2.0);
  Vector zero(2), plus(2), one(2);
  zero << 1, 0;
  plus << s, s;
  one << 0, 1;
  std::vector<WeightedState> states;
  for (const auto& [prior, phi] :
       {std::pair{0.1, zero}, std::pair{0.3, plus}, std::pair{0.3, plus},
        std::pair{0.3, one}}) {
    WeightedState ws;
    ws.prior = prior;
    ws.rho = phi * phi.adjoint();
    ws.pure = phi;
    states.push_back(ws);
  }
  const Ensemble e = Ensemble::create(2, states);
  const auto [cert, trace] = solve_dual(e);
  const RecoveryResult res = recover_measurement(cert, e);

  CHECK(res.resolution_error <= 1e-6);
  CHECK(res.coefficients.minCoeff() >= 0.0);
  Matrix total = Matrix::Zero(2, 2);
  for (const Matrix& op : res.measurement.operators) total += op;
  CHECK(max_abs(total - Matrix::Identity(2, 2)) <= 1e-6);
}

TEST_CASE("single full-rank state recovers the identity") {
  const Ensemble e = generate_ensemble(StateKind::mixed, 2, 1, 31);
  const auto [cert, trace] = solve_dual(e);
  const RecoveryResult res = recover_measurement(cert, e);
  REQUIRE(res.measurement.operators.size() == 1);
  CHECK(max_abs(res.measurement.operators[0] - Matrix::Identity(2, 2)) <=
        1e-6);
  CHECK_FALSE(res.measurement.vectors.has_value());
}

TEST_CASE("a dual matrix with padded slacks needs an escalated rank_tol") {
  const Ensemble e = golden_triple();
  auto [cert, trace] = solve_dual(e);
  cert.x += 3e-6 * Matrix::Identity(2, 2);

  CHECK_THROWS_AS(null_space_basis(cert, e, 1e-6), RecoveryError);
  const RecoveryResult res = recover_measurement(cert, e);
  CHECK(res.rank_tol_used == doctest::Approx(1e-5));
  CHECK(res.resolution_error <= 1e-6);
}

TEST_CASE("null spaces beyond the state rank abort immediately") {
  const double s = 1.0 / std::sqrt(2.0);
  Vector zero(2), plus(2);
  zero << 1, 0;
  plus << s, s;
  std::vector<WeightedState> states;
  for (const Vector& phi : {zero, plus}) {
    WeightedState ws;
    ws.prior = 0.5;
    ws.rho = phi * phi.adjoint();
    ws.pure = phi;
    states.push_back(ws);
  }
  const Ensemble e = Ensemble::create(2, states);

  DualCertificate cert;
  cert.x = e.weighted(0);  // slack of state 0 vanishes identically
  cert.objective = cert.x.trace().real();
  CHECK_THROWS_AS(null_space_basis(cert, e, 1e-6), RecoveryError);
  CHECK_THROWS_AS(recover_measurement(cert, e), RecoveryError);
}

TEST_CASE("empty bundles are rejected") {
  NullSpaceBundle bundle;
  bundle.vectors.resize(2);
  CHECK_THROWS_AS(assemble_system(bundle, 2), RecoveryError);
}

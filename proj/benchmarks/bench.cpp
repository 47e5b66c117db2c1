#include "qdetect/dual_solver.hpp"
#include "qdetect/generate.hpp"
#include "qdetect/linalg.hpp"
#include "qdetect/lsm.hpp"
#include "qdetect/pipeline.hpp"
#include "qdetect/recovery.hpp"
#include "qdetect/simplex.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qdetect;

namespace {

void bm_solve_dual(benchmark::State& state) {
  const Index n = state.range(0);
  const Ensemble e = generate_ensemble(StateKind::mixed, n, 3, 7);
  for (auto _ : state) {
    const auto solved = solve_dual(e);
    benchmark::DoNotOptimize(solved.first.objective);
  }
}
BENCHMARK(bm_solve_dual)->Arg(2)->Arg(4)->Arg(8)->Arg(16)
    ->Unit(benchmark::kMillisecond);

void bm_full_pipeline(benchmark::State& state) {
  const Index n = state.range(0);
  const Ensemble e = generate_ensemble(StateKind::mixed, n, 4, 11, true);
  for (auto _ : state) {
    const SolveOutcome out = solve_ensemble(e);
    benchmark::DoNotOptimize(out.report.p_correct);
  }
}
BENCHMARK(bm_full_pipeline)->Arg(2)->Arg(4)->Arg(8)
    ->Unit(benchmark::kMillisecond);

void bm_recover_measurement(benchmark::State& state) {
  const Ensemble e = generate_ensemble(StateKind::mixed, 4, 4, 13, true);
  const auto solved = solve_dual(e);
  for (auto _ : state) {
    const RecoveryResult rec = recover_measurement(solved.first, e);
    benchmark::DoNotOptimize(rec.resolution_error);
  }
}
BENCHMARK(bm_recover_measurement)->Unit(benchmark::kMicrosecond);

void bm_hermitian_eig(benchmark::State& state) {
  const Index n = state.range(0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  m = hermitian_part(m);
  for (auto _ : state) {
    const EigenDecomposition eig = hermitian_eig(m);
    benchmark::DoNotOptimize(eig.eigenvalues(0));
  }
}
BENCHMARK(bm_hermitian_eig)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void bm_simplex_lp(benchmark::State& state) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Index rows = 6;
  const Index cols = 12;
  RealMatrix a(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index j = 0; j < cols; ++j) a(r, j) = gauss(rng);
  RealVector x0(cols);
  for (Index j = 0; j < cols; ++j) x0(j) = unit(rng);
  const RealVector b = a * x0;
  RealVector c(cols);
  for (Index j = 0; j < cols; ++j) c(j) = unit(rng);
  for (auto _ : state) {
    const LpResult res = simplex_lp(c, a, b);
    benchmark::DoNotOptimize(res.objective);
  }
}
BENCHMARK(bm_simplex_lp)->Unit(benchmark::kMicrosecond);

void bm_lsm_prob_correct(benchmark::State& state) {
  const Ensemble e = generate_ensemble(StateKind::pure, 8, 8, 29);
  const PureEnsembleView view = pure_view(e);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lsm_prob_correct(view));
  }
}
BENCHMARK(bm_lsm_prob_correct)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

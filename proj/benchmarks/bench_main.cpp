#include <benchmark/benchmark.h>

#include "lsieve/duality.hpp"
#include "lsieve/gaussint.hpp"
#include "lsieve/sieve.hpp"
#include "lsieve/spacing.hpp"
#include "lsieve/weylsum.hpp"

using namespace lsieve;

namespace {

ModuliFamily squares(double Q) {
  ModuliFamily f;
  f.kind = FamilyKind::squares;
  f.Q = Q;
  return f;
}

void BM_divisor_count(benchmark::State& state) {
  const GaussInt d{2 * 3 * 5 * 7 * 11, 13 * 17};
  for (auto _ : state) benchmark::DoNotOptimize(divisor_count(d));
}
BENCHMARK(BM_divisor_count);

void BM_residue_system(benchmark::State& state) {
  const GaussInt m{static_cast<Int>(state.range(0)), 7};
  for (auto _ : state) benchmark::DoNotOptimize(residue_system(m, true).representatives.size());
}
BENCHMARK(BM_residue_system)->Arg(20)->Arg(80);

void BM_trig_sum(benchmark::State& state) {
  const CoefficientSeq a = make_coefficients(CoeffKind::random, static_cast<double>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(trig_sum(a, {3, 2}, {11, 4}));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * a.size()));
}
BENCHMARK(BM_trig_sum)->Arg(64)->Arg(1024);

void BM_lhs_T(benchmark::State& state) {
  const ModuliFamily f = squares(static_cast<double>(state.range(0)));
  const CoefficientSeq a = make_coefficients(CoeffKind::random, 36, 1);
  for (auto _ : state) benchmark::DoNotOptimize(lhs_T(f, a));
}
BENCHMARK(BM_lhs_T)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_K_counts(benchmark::State& state) {
  const auto pts = farey_points(squares(8));
  const PairSearch search = state.range(0) == 0 ? PairSearch::brute : PairSearch::bucketed;
  for (auto _ : state) {
    benchmark::DoNotOptimize(K_euclid(pts, 64, search));
    benchmark::DoNotOptimize(K_norm(pts, 64, search));
  }
}
BENCHMARK(BM_K_counts)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_S_direct(benchmark::State& state) {
  WeylConfig c;
  c.k = 2;
  c.Q0 = static_cast<double>(state.range(0));
  c.q1 = state.range(0) == 5 ? GaussInt{2, 1} : GaussInt{4, 2};
  for (auto _ : state) benchmark::DoNotOptimize(S_direct(c).value);
}
BENCHMARK(BM_S_direct)->Arg(5)->Arg(20);

void BM_S2_poisson(benchmark::State& state) {
  WeylConfig c;
  c.k = 2;
  c.Q0 = 20;
  c.q1 = {4, 2};
  for (auto _ : state) benchmark::DoNotOptimize(S2_squared_poisson(c).value);
}
BENCHMARK(BM_S2_poisson)->Unit(benchmark::kMillisecond);

void BM_duality(benchmark::State& state) {
  const Eigen::MatrixXcd m = random_complex_matrix(8, 12, 1);
  for (auto _ : state) benchmark::DoNotOptimize(duality_check(m).forward);
}
BENCHMARK(BM_duality);

}  // namespace

BENCHMARK_MAIN();

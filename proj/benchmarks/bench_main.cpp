#include "linepack/bounds.hpp"
#include "linepack/certify.hpp"
#include "linepack/delsarte.hpp"
#include "linepack/frames.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace linepack;

void BM_TangencySolve(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tangency_solve(k, Field::Complex));
}
BENCHMARK(BM_TangencySolve)->Arg(2)->Arg(50);

void BM_MinimizeC0(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_c0(8, Field::Complex, grid));
}
BENCHMARK(BM_MinimizeC0)->Arg(513)->Arg(4097)->Unit(benchmark::kMillisecond);

void BM_GramReport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = random_configuration(8, n, Field::Complex, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gram_report(x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_GramReport)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_LemmaCertificate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto x = random_configuration(d, 2 * d, Field::Real, 3);
  for (auto _ : state) benchmark::DoNotOptimize(lemma_certificate(x));
}
BENCHMARK(BM_LemmaCertificate)->Arg(4)->Arg(8)->Arg(32);

void BM_BoundReportRow(benchmark::State& state) {
  int n = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bound_report(6, n, Field::Real));
    n = n == 40 ? 7 : n + 1;
  }
}
BENCHMARK(BM_BoundReportRow);

}  // namespace

BENCHMARK_MAIN();

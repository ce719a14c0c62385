#include <benchmark/benchmark.h>

#include "qbench/kak.hpp"
#include "qbench/randgen.hpp"
#include "qbench/transpile.hpp"

using namespace qbench;

static void BM_KakDecompose(benchmark::State& state) {
  Rng rng(1);
  const Mat4 u = haar_unitary(4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kak_decompose(u));
}
BENCHMARK(BM_KakDecompose);

static void BM_ThreeCxSynthesis(benchmark::State& state) {
  Rng rng(2);
  const Mat4 u = haar_unitary(4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_three_cx(u, 0, 1));
}
BENCHMARK(BM_ThreeCxSynthesis);

static void BM_BasePipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const Circuit c = qv_model_circuit(n, rng);
  const DeviceModel d = devices::line(n);
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(c, d, TranspileConfig{}));
}
BENCHMARK(BM_BasePipeline)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

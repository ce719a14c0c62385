#include <benchmark/benchmark.h>

#include "qbench/randgen.hpp"
#include "qbench/stabilizer.hpp"
#include "qbench/statevector.hpp"

using namespace qbench;

static void BM_IdealDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const Circuit c = qv_model_circuit(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(ideal_distribution(c));
}
BENCHMARK(BM_IdealDistribution)->DenseRange(4, 16, 4)->Unit(benchmark::kMillisecond);

static void BM_NoisySampling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng gen(2);
  const Circuit c = qv_model_circuit(n, gen);
  NoiseModel noise;
  noise.gate_error[GateKind::U2Q] = 0.01;
  const Simulator sim(c);
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sim.sample(1000, noise, rng));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_NoisySampling)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_StabilizerSampling(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng gen(4);
  const Circuit c = random_clifford_circuit(n, n, gen);
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(stabilizer_sample(c, 100, rng));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_StabilizerSampling)->RangeMultiplier(4)->Range(8, 256)->Unit(benchmark::kMillisecond);

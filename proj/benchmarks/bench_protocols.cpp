#include <benchmark/benchmark.h>

#include "qbench/protocols.hpp"

using namespace qbench;

static void BM_QuantumVolumeWidth(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DeviceModel d = devices::line(n);
  QvOptions opt;
  opt.min_width = n;
  opt.max_width = n;
  opt.circuits_per_width = 10;
  opt.shots = 500;
  opt.strict = false;
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(run_quantum_volume(d, NoiseModel{}, opt, rng));
  }
}
BENCHMARK(BM_QuantumVolumeWidth)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_RandomizedBenchmarking(benchmark::State& state) {
  NoiseModel noise;
  noise.gate_error[GateKind::Barrier] = 0.01;
  RbOptions opt;
  opt.n_qubits = static_cast<int>(state.range(0));
  opt.sequences_per_length = 5;
  opt.shots = 100;
  const DeviceModel d = devices::line(2);
  for (auto _ : state) {
    Rng rng(2);
    benchmark::DoNotOptimize(run_rb(d, noise, opt, rng));
  }
}
BENCHMARK(BM_RandomizedBenchmarking)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_MirrorWide(benchmark::State& state) {
  MirrorOptions opt;
  opt.widths = {static_cast<int>(state.range(0))};
  opt.randomizations = 2;
  const DeviceModel d = devices::line(opt.widths[0]);
  for (auto _ : state) {
    Rng rng(3);
    benchmark::DoNotOptimize(run_mirror_benchmark(d, NoiseModel{}, opt, rng));
  }
}
BENCHMARK(BM_MirrorWide)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Clops(benchmark::State& state) {
  ClopsOptions opt;
  opt.width = 4;
  opt.layers_total = 40;
  const DeviceModel d = devices::line(4);
  for (auto _ : state) {
    Rng rng(4);
    const ClopsResult r = run_clops(d, NoiseModel{}, opt, rng);
    state.counters["layers_per_second"] = r.layers_per_second;
  }
}
BENCHMARK(BM_Clops)->Unit(benchmark::kMillisecond);

static void BM_Shadows(benchmark::State& state) {
  const std::vector<PauliString> obs = {PauliString::parse("+ZZI"), PauliString::parse("+XXX")};
  const Circuit prep = ghz_circuit(3);
  for (auto _ : state) {
    Rng rng(5);
    benchmark::DoNotOptimize(shadow_estimate(prep, obs, 1000, rng));
  }
}
BENCHMARK(BM_Shadows)->Unit(benchmark::kMillisecond);

#include <benchmark/benchmark.h>

#include "zerofid/experiment.hpp"

using namespace zerofid;

namespace {

Circuit random_clifford_circuit(int n, int depth, RngStream& rng) {
  Circuit c(n);
  for (int k = 0; k < depth; ++k) {
    const auto part = clifford_to_circuit(random_clifford(n, rng));
    for (const auto& g : part.gates) c.append(g);
  }
  return c;
}

void bm_run_exact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(1, "bench.run_exact");
  const Circuit c = random_clifford_circuit(n, 8, rng);
  NoiseModel noise;
  noise.gate_depolarizing[1] = 0.001;
  noise.gate_depolarizing[2] = 0.01;
  const DensityMatrix rho = DensityMatrix::pure(CVec::Unit(1 << n, 0));
  for (auto _ : state) benchmark::DoNotOptimize(run_exact(c, &noise, rho));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(bm_run_exact)->Arg(2)->Arg(3);

void bm_circuit_superop(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  NoiseModel noise;
  noise.gate_depolarizing[2] = 0.01;
  const Circuit layer = cz_layer(n);
  for (auto _ : state) benchmark::DoNotOptimize(circuit_superop(layer, &noise));
}
BENCHMARK(bm_circuit_superop)->Arg(2)->Arg(3)->Arg(4);

void bm_zero_fidelity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Channel ideal = identity_channel(n);
  const Channel actual = depolarizing(n, 0.03);
  for (auto _ : state) benchmark::DoNotOptimize(zero_fidelity(ideal, actual));
}
BENCHMARK(bm_zero_fidelity)->Arg(1)->Arg(2);

void bm_sequence_zero_fidelity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(2, "bench.seq");
  const RBSequence seq = rb_sequence(n, 10, rng);
  NoiseModel noise;
  noise.gate_depolarizing[1] = 0.001;
  noise.gate_depolarizing[2] = 0.01;
  for (auto _ : state) {
    RngStream run_rng(3, "bench.seq.run");
    benchmark::DoNotOptimize(sequence_zero_fidelity(seq, noise, kExactShots, run_rng));
  }
}
BENCHMARK(bm_sequence_zero_fidelity)->Arg(1)->Arg(2);

void bm_random_clifford(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(4, "bench.clifford");
  for (auto _ : state) benchmark::DoNotOptimize(random_clifford(n, rng));
}
BENCHMARK(bm_random_clifford)->Arg(1)->Arg(2)->Arg(3);

void bm_fit_decay(benchmark::State& state) {
  std::vector<std::pair<double, double>> pts;
  for (int m = 1; m <= 20; ++m) pts.emplace_back(m, 0.85 * std::pow(0.953, m) + 0.12);
  for (auto _ : state) benchmark::DoNotOptimize(fit_decay(pts, 2));
}
BENCHMARK(bm_fit_decay);

}  // namespace

BENCHMARK_MAIN();

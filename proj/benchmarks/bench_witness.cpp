#include <benchmark/benchmark.h>

#include <random>

#include "entsep/entsep.hpp"

using namespace entsep;

static void BM_BuildWitness(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int alpha = static_cast<int>(state.range(1));
  const DimSpec dims{d, d};
  const MapTableau t = tableaux::fact3(dims, alpha, Side::B, spin_flip_V(d));
  for (auto _ : state) benchmark::DoNotOptimize(build_witness(t, dims));
}
BENCHMARK(BM_BuildWitness)->Args({2, 3})->Args({2, 5})->Args({4, 2})->Unit(benchmark::kMillisecond);

static void BM_EvaluateWitness(benchmark::State& state) {
  const DimSpec dims{4, 4};
  const MultiCopyWitness w = build_witness(tableaux::fact4(dims, 3, Side::B, spin_flip_V(4)), dims);
  std::mt19937_64 rng(4);
  const DensityMatrix rho = random_density(dims, rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_witness(w, rho));
  state.counters["nonzeros"] = static_cast<double>(w.op.nonZeros());
}
BENCHMARK(BM_EvaluateWitness)->Unit(benchmark::kMillisecond);

static void BM_JointProbabilities(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  const DensityMatrix rho = random_density(DimSpec::qubits(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(joint_probabilities(rho));
}
BENCHMARK(BM_JointProbabilities)->DenseRange(1, 4);

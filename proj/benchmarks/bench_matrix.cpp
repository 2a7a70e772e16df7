#include <benchmark/benchmark.h>

#include <random>

#include "entsep/entsep.hpp"

using namespace entsep;

static void BM_HermitianEig(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const ComplexMatrix m = random_density(DimSpec{n}, rng).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(m));
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(16)->Arg(64);

static void BM_PartialTranspose(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const DensityMatrix rho = random_density(DimSpec{4, 4}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(partial_transpose(rho.matrix(), rho.dims(), 0));
}
BENCHMARK(BM_PartialTranspose);

static void BM_MatPowInt(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const ComplexMatrix m = random_density(DimSpec{4, 4}, rng).matrix();
  const int alpha = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mat_pow_int(m, alpha));
}
BENCHMARK(BM_MatPowInt)->Arg(5)->Arg(17)->Arg(201);

#include <benchmark/benchmark.h>

#include "entsep/entsep.hpp"

using namespace entsep;

namespace {

const DensityMatrix& so3_state() {
  static const DensityMatrix rho = so3_invariant_4x4(So3Params{0.2, 0.3, 0.1});
  return rho;
}

}  // namespace

static void BM_Criterion(benchmark::State& state, const char* text) {
  const CriterionRequest req = parse_criterion_request(text);
  const auto u = spin_flip_V(4);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_criterion(req, so3_state(), u));
}
BENCHMARK_CAPTURE(BM_Criterion, ppt, "ppt");
BENCHMARK_CAPTURE(BM_Criterion, breuer, "breuer");
BENCHMARK_CAPTURE(BM_Criterion, entropic_5, "entropic:5");
BENCHMARK_CAPTURE(BM_Criterion, fact3_5, "fact3:5");
BENCHMARK_CAPTURE(BM_Criterion, fact4_17, "fact4:17");
BENCHMARK_CAPTURE(BM_Criterion, fact3_limit, "fact3_limit");
BENCHMARK_CAPTURE(BM_Criterion, oddcut_6, "oddcut:6");

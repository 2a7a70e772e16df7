#include <benchmark/benchmark.h>

#include "entsep/entsep.hpp"

using namespace entsep;

static void BM_ClassifyPoint(benchmark::State& state) {
  std::vector<CriterionRequest> criteria;
  for (const char* c : {"ppt", "breuer", "entropic:5", "fact3:5", "fact4:5", "fact4:17", "fact3_limit", "fact4_limit",
                        "oddcut:6"})
    criteria.push_back(parse_criterion_request(c));
  const ParamMap p = {{"p", 0.2}, {"q", 0.3}, {"r", 0.1}};
  const auto u = spin_flip_V(4);
  for (auto _ : state) benchmark::DoNotOptimize(classify_point(Family::So3, p, criteria, u));
}
BENCHMARK(BM_ClassifyPoint);

static void BM_RunScan(benchmark::State& state) {
  ScanSpec spec;
  spec.family = Family::So3;
  spec.fixed = {{"p", 0.0}};
  const int steps = static_cast<int>(state.range(0));
  spec.axes = {Axis{"q", 0.0, 1.0, steps}, Axis{"r", 0.0, 1.0, steps}};
  spec.criteria = {parse_criterion_request("ppt"), parse_criterion_request("fact3:5")};
  spec.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_scan(spec));
  state.SetItemsProcessed(state.iterations() * steps * steps);
}
BENCHMARK(BM_RunScan)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

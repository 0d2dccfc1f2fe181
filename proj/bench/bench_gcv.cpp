#include <benchmark/benchmark.h>

#include <omp.h>

#include <map>

#include "gvr/experiments.hpp"

using namespace gvr;

namespace {

const TrialData& data_for(Index n) {
  static std::map<Index, TrialData> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_trial(1, 0, InputSignal::impulse(), n, 10.0, 10, 0.1, 0.9)).first;
  return it->second;
}

void gcv_eval(benchmark::State& state, Method m) {
  const Index n = state.range(0);
  const IdentProblem p{data_for(n).y, TimeGrid::uniform(n), InputSignal::impulse(), KernelSpec::dc(0.9, 0.6), 1e-2};
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_criteria(p, m).gcv);
  state.SetComplexityN(n);
}

// Full default grid (512 points) with the given worker count; threads = 1 is the serial path.
void grid_search(benchmark::State& state) {
  const Index n = state.range(0);
  OptimizeOptions opt;
  opt.threads = static_cast<int>(state.range(1));
  const auto points = hyper_grid(KernelSpec::Family::DC, opt);
  const auto& d = data_for(n);
  const TimeGrid grid = TimeGrid::uniform(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        grid_objectives(d.y, grid, InputSignal::impulse(), points, Criterion::GCV, Method::GvR, opt));
}

}  // namespace

BENCHMARK_CAPTURE(gcv_eval, GvR, Method::GvR)->RangeMultiplier(2)->Range(300, 4800)->Complexity(benchmark::oN);
BENCHMARK_CAPTURE(gcv_eval, GvRt, Method::GvRt)->RangeMultiplier(2)->Range(300, 4800)->Complexity(benchmark::oN);
BENCHMARK_CAPTURE(gcv_eval, GRs, Method::GRs)->RangeMultiplier(2)->Range(300, 2400);
BENCHMARK_CAPTURE(gcv_eval, Ref, Method::Ref)->RangeMultiplier(2)->Range(300, 2400)->Unit(benchmark::kMillisecond);
BENCHMARK(grid_search)
    ->ArgsProduct({{600, 2400}, {1, omp_get_max_threads()}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();

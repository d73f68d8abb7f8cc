#include <benchmark/benchmark.h>

#include "zodfo/baselines.hpp"
#include "zodfo/problems.hpp"
#include "zodfo/varag.hpp"

namespace {

void BM_VaragEpochs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = 16;
  const auto problem = zodfo::quadratic_objective(d, n, 0.1, 1.0, 3);
  const auto schedule = zodfo::make_schedule(zodfo::Regime::gaussian_strongly_convex,
                                             d, n, 1.0, 0.1, 1);
  for (auto _ : state) {
    zodfo::VaragConfig cfg(schedule);
    cfg.epochs = 4;
    cfg.seed = 11;
    const auto trace = zodfo::zo_varag(problem.objective, cfg);
    benchmark::DoNotOptimize(trace.total_queries());
  }
}
BENCHMARK(BM_VaragEpochs)->Arg(32)->Arg(128);

void BM_SvrgEpochs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = 16;
  const auto problem = zodfo::quadratic_objective(d, n, 0.1, 1.0, 3);
  for (auto _ : state) {
    zodfo::BaselineConfig cfg;
    cfg.epochs = 4;
    cfg.seed = 11;
    const auto trace = zodfo::zo_svrg(problem.objective, cfg);
    benchmark::DoNotOptimize(trace.total_queries());
  }
}
BENCHMARK(BM_SvrgEpochs)->Arg(32)->Arg(128);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}

#include <benchmark/benchmark.h>

#include "zodfo/estimators.hpp"
#include "zodfo/problems.hpp"
#include "zodfo/rng.hpp"

namespace {

zodfo::FiniteSumObjective make_objective(int d) {
  return zodfo::quadratic_objective(d, 64, 0.1, 1.0, 7).objective;
}

void BM_GaussianComponentEstimate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto obj = make_objective(d);
  const zodfo::EstimatorConfig cfg;
  zodfo::RngStream rng(1);
  const zodfo::Vector x = rng.gaussian_vector(d);
  const zodfo::Vector u = rng.gaussian_vector(d);
  zodfo::QueryCounter counter;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        zodfo::gaussian_component_estimate(obj, 0, x, u, cfg, counter));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_GaussianComponentEstimate)->Arg(8)->Arg(32)->Arg(128);

void BM_CoordinateComponentEstimate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto obj = make_objective(d);
  const zodfo::EstimatorConfig cfg;
  zodfo::RngStream rng(1);
  const zodfo::Vector x = rng.gaussian_vector(d);
  zodfo::QueryCounter counter;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        zodfo::coordinate_component_estimate(obj, 0, x, cfg, counter));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_CoordinateComponentEstimate)->Arg(8)->Arg(32)->Arg(128);

void BM_CoordinateFullEstimate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto obj = make_objective(d);
  const zodfo::EstimatorConfig cfg;
  zodfo::RngStream rng(1);
  const zodfo::Vector x = rng.gaussian_vector(d);
  zodfo::QueryCounter counter;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zodfo::coordinate_full_estimate(obj, x, cfg, counter));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_CoordinateFullEstimate)->Arg(8)->Arg(32);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}

#include <benchmark/benchmark.h>

#include <vector>

#include "levyext/geometry.hpp"
#include "levyext/simulator.hpp"

namespace {

using namespace levyext;

SimulationWindow square_window(double side, std::uint64_t replicate = 0) {
  const std::vector<double> corner{-side / 2, -side / 2}, sides{side, side};
  PConvexSet target(ConvexBody::box(corner, sides));
  return SimulationWindow{target, 4.0, 0.05, 42, replicate};
}

void BM_SimulateHeavy(benchmark::State& state) {
  const auto w = square_window(static_cast<double>(state.range(0)));
  const auto model = TailModel::pareto(1.0);
  const auto kernel = Kernel::gaussian(1.0, 2);
  std::size_t atoms = 0;
  for (auto _ : state) {
    auto field = simulate_heavy(w, model, kernel);
    atoms += field.atoms.size();
    benchmark::DoNotOptimize(field);
  }
  state.counters["atoms/iter"] =
      benchmark::Counter(static_cast<double>(atoms), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SimulateHeavy)->Arg(10)->Arg(32)->Arg(100);

void BM_EvaluateField(benchmark::State& state) {
  const auto w = square_window(static_cast<double>(state.range(0)));
  const auto field = simulate_heavy(w, TailModel::pareto(1.0), Kernel::gaussian(1.0, 2));
  const FieldEvaluator ev({&field});
  const auto nodes = grid_nodes(w.target, GridSpec{0.1, {}});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_field(ev, nodes));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(nodes.size()));
}
BENCHMARK(BM_EvaluateField)->Arg(10)->Arg(32);

void BM_SupremumBranchAndBound(benchmark::State& state) {
  const auto w = square_window(static_cast<double>(state.range(0)));
  const auto field = simulate_heavy(w, TailModel::pareto(1.0), Kernel::gaussian(1.0, 2));
  const FieldEvaluator ev({&field});
  for (auto _ : state) benchmark::DoNotOptimize(grid_supremum(ev, w.target, GridSpec{0.05, {}}));
}
BENCHMARK(BM_SupremumBranchAndBound)->Arg(10)->Arg(32)->Arg(100);

void BM_SupremumExhaustive(benchmark::State& state) {
  const auto w = square_window(static_cast<double>(state.range(0)));
  const auto field = simulate_heavy(w, TailModel::pareto(1.0), Kernel::gaussian(1.0, 2));
  const FieldEvaluator ev({&field});
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_supremum_exhaustive(ev, w.target, GridSpec{0.05, {}}));
  }
}
BENCHMARK(BM_SupremumExhaustive)->Arg(10)->Arg(32);

void BM_BuildGrid(benchmark::State& state) {
  const std::vector<double> origin{0.0, 0.0};
  const PConvexSet disk(ConvexBody::ball(origin, 1.0));
  const auto scaled = disk.scaled(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_grid(scaled, 10000, 1));
}
BENCHMARK(BM_BuildGrid)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "rideshare/fairness.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/matching.hpp"
#include "rideshare/rtv.hpp"
#include "rideshare/trip.hpp"

using namespace rideshare;

namespace {

Instance rush(int users, Ratio ratio = {1, 2}) {
  RushHourConfig c;
  c.users = users;
  c.ratio = ratio;
  c.seed = 7;
  return gen_rush_hour(c);
}

// First driver with at least `size` compatible riders, and those riders.
std::pair<int, std::vector<int>> busy_driver(const Instance& inst, std::size_t size) {
  const auto rv = build_rv(inst);
  for (int d = 0; d < static_cast<int>(inst.drivers.size()); ++d) {
    if (rv.driver_riders[d].size() >= size) {
      return {d, {rv.driver_riders[d].begin(), rv.driver_riders[d].begin() + size}};
    }
  }
  return {0, {}};
}

void BM_TripCost(benchmark::State& state) {
  const auto inst = rush(60, {1, 3});
  const auto [d, riders] = busy_driver(inst, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trip_cost(inst, d, riders));
  state.SetLabel(std::to_string(riders.size()) + " riders");
}
BENCHMARK(BM_TripCost)->Arg(1)->Arg(2)->Arg(3);

void BM_TimingLp(benchmark::State& state) {
  const auto inst = rush(60, {1, 3});
  const auto [d, riders] = busy_driver(inst, 2);
  const auto routes = all_routes(inst, d, riders);
  for (auto _ : state) {
    for (const auto& r : routes) benchmark::DoNotOptimize(solve_timing(inst, r));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(routes.size()));
}
BENCHMARK(BM_TimingLp);

void BM_BuildRtv(benchmark::State& state) {
  const auto inst = rush(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_rtv(inst, build_rv(inst)));
}
BENCHMARK(BM_BuildRtv)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Matching(benchmark::State& state) {
  const auto inst = rush(static_cast<int>(state.range(0)));
  const auto p = build_rtv(inst, build_rv(inst));
  MatchOptions o;
  o.require_stability = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_matching(p, o));
}
BENCHMARK(BM_Matching)->Args({50, 0})->Args({50, 1})->Args({100, 0})->Unit(benchmark::kMillisecond);

void BM_MinCostFair(benchmark::State& state) {
  const auto inst = rush(50);
  const auto p = build_rtv(inst, build_rv(inst));
  const auto fairest = max_fairness(p);
  for (auto _ : state) benchmark::DoNotOptimize(min_cost_fair(p, 0.5 * fairest.theta0, {}, &fairest));
}
BENCHMARK(BM_MinCostFair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

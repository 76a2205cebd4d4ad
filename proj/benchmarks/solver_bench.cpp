#include <benchmark/benchmark.h>

#include "kinalloc/best_response.hpp"
#include "kinalloc/equilibrium.hpp"
#include "kinalloc/oracle.hpp"
#include "kinalloc/pedigree.hpp"

namespace {

using namespace kinalloc;

void BM_WaterFill(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FamilyGame game = random_instance(42, {.n = n});
  const std::vector<double> external(n, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(water_fill(game, 0, external));
}
BENCHMARK(BM_WaterFill)->RangeMultiplier(2)->Range(2, 64);

void BM_SolveNash(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FamilyGame game = random_instance(7, {.n = n});
  SolveOptions options;
  options.mode = static_cast<SolveMode>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve_nash(game, options));
}
BENCHMARK(BM_SolveNash)
    ->ArgsProduct({{2, 4, 8, 16}, {static_cast<int>(SolveMode::RoundRobin), static_cast<int>(SolveMode::Simultaneous)}})
    ->Unit(benchmark::kMicrosecond);

void BM_KktVerify(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const FamilyGame game = random_instance(7, {.n = n});
  const auto report = solve_nash(game);
  for (auto _ : state) benchmark::DoNotOptimize(kkt_verify(game, report.profile));
}
BENCHMARK(BM_KktVerify)->Arg(4)->Arg(16)->Arg(64);

void BM_GridNashCheck(benchmark::State& state) {
  const FamilyGame game = random_instance(3, {.n = 3, .budget_range = {2.0, 3.0}});
  const auto report = solve_nash(game);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(grid_nash_check(game, report.profile, {}, parallel));
}
BENCHMARK(BM_GridNashCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PedigreeRelatedness(benchmark::State& state) {
  // A line of sib pairs: each generation's pair are children of the previous pair's first member.
  const auto generations = static_cast<int>(state.range(0));
  Pedigree ped;
  ped.members.push_back({"g0", std::nullopt, std::nullopt});
  for (int g = 1; g <= generations; ++g) {
    const std::string parent = "g" + std::to_string(g - 1);
    const std::string spouse = "s" + std::to_string(g);
    ped.members.push_back({spouse, std::nullopt, std::nullopt});
    ped.members.push_back({"g" + std::to_string(g), parent, spouse});
    ped.members.push_back({"h" + std::to_string(g), parent, spouse});
  }
  for (auto _ : state) benchmark::DoNotOptimize(pedigree_to_relatedness(ped));
}
BENCHMARK(BM_PedigreeRelatedness)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();

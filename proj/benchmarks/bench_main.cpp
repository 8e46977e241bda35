#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "convexreg/cone.hpp"
#include "convexreg/entropy.hpp"
#include "convexreg/functions.hpp"
#include "convexreg/random.hpp"
#include "convexreg/sim.hpp"

namespace {

using namespace convexreg;

std::vector<double> noisy_square(const DesignGrid& grid, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> y(grid.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = grid[i] * grid[i] + 0.3 * rng.normal();
  return y;
}

void BM_Project(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DesignGrid grid = make_grid(GridKind::uniform, n);
  const std::vector<double> y = noisy_square(grid, 7);
  for (auto _ : state) benchmark::DoNotOptimize(project(y, grid));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Project)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_Dykstra(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DesignGrid grid = make_grid(GridKind::uniform, n);
  const std::vector<double> y = noisy_square(grid, 7);
  for (auto _ : state) benchmark::DoNotOptimize(project_dykstra(y, grid, 200, 1e-12));
}
BENCHMARK(BM_Dykstra)->Arg(64)->Arg(256);

void BM_VgCode(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(vg_code(m, 3));
}
BENCHMARK(BM_VgCode)->Arg(16)->Arg(32)->Arg(64);

void BM_BuildPacking(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const DesignGrid grid = make_grid(GridKind::uniform, 8192);
  const TruthFunction truth = TruthFunction::named("x2");
  const CurvatureClass cls{0.0, 1.0, 2.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(build_packing(truth, cls, m, grid, 3));
}
BENCHMARK(BM_BuildPacking)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SimulateOnce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SimulationTarget target = make_target(TruthFunction::named("x2"), make_grid(GridKind::uniform, n));
  std::uint64_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_once(target, 0.3, replication_seed(1, n, rep++)));
}
BENCHMARK(BM_SimulateOnce)->Arg(100)->Arg(800)->Arg(3200);

}  // namespace
BENCHMARK_MAIN();

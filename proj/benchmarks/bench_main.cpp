// Microbenchmarks for the hot paths: kernel DP sweeps, renewal and bridge
// table construction, path sampling, and the density-ratio batch.

#include <benchmark/benchmark.h>

#include <vector>

#include "poswalk/fluctuation.hpp"
#include "poswalk/invariance.hpp"
#include "poswalk/kernels.hpp"
#include "poswalk/rng.hpp"
#include "poswalk/samplers.hpp"
#include "poswalk/step_law.hpp"

using namespace poswalk;

static void BM_KernelTable(benchmark::State& state) {
  const StepLaw law = make_step_law("lazy");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(q_plus(law, n, 24, 24, Strictness::strict));
}
BENCHMARK(BM_KernelTable)->Arg(16)->Arg(64)->Arg(256);

static void BM_SurvivalCurve(benchmark::State& state) {
  const StepLaw law = make_step_law("lazy");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(survival_curve(law, Strictness::strict, n));
}
BENCHMARK(BM_SurvivalCurve)->Arg(1 << 10)->Arg(1 << 14);

static void BM_RenewalTable(benchmark::State& state) {
  const StepLaw law = make_step_law("lazy");
  for (auto _ : state)
    benchmark::DoNotOptimize(renewal_table(law, false, 256));
}
BENCHMARK(BM_RenewalTable);

static void BM_BridgeTable(benchmark::State& state) {
  const StepLaw law = make_step_law("lazy");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bridge_transition_table(law, Strictness::strict, n, 0));
}
BENCHMARK(BM_BridgeTable)->Arg(256)->Arg(1024);

static void BM_BridgeSample(benchmark::State& state) {
  const StepLaw law = make_step_law("lazy");
  const int n = static_cast<int>(state.range(0));
  const BridgeTable table =
      bridge_transition_table(law, Strictness::strict, n, 0);
  PhiloxRng rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_bridge(table, 0, rng));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_BridgeSample)->Arg(256)->Arg(1024);

static void BM_RadonNikodymBatch(benchmark::State& state) {
  const StepLaw law = make_step_law("lazy");
  const RenewalTable desc = renewal_table(law, false, 160);
  std::vector<double> z_grid;
  for (int i = 0; i <= 60; ++i) z_grid.push_back(0.05 * i);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        radon_nikodym_batch(law, desc, 1024, 0.25, 0, 0, z_grid));
}
BENCHMARK(BM_RadonNikodymBatch);

static void BM_PhiloxUniform(benchmark::State& state) {
  PhiloxRng rng(1, 0);
  double acc = 0.0;
  for (auto _ : state) acc += rng.uniform();
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxUniform);

BENCHMARK_MAIN();

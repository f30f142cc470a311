#include <benchmark/benchmark.h>

#include <chaomarket/bimap.hpp>
#include <chaomarket/market.hpp>
#include <chaomarket/statistics.hpp>

#include <random>
#include <vector>

using namespace chaomarket;

static void BM_BimapStep(benchmark::State& state) {
  const BimapParams params(1.032, 1.08429);
  BimapState s{0.5, 0.3};
  for (auto _ : state) {
    s = bimap_step(s, params);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_BimapStep);

static void BM_RunSimulation(benchmark::State& state) {
  MarketConfig c;
  c.n_agents = static_cast<std::size_t>(state.range(0));
  c.bimap_params = BimapParams(1.032, 1.08429);
  for (auto _ : state) {
    SimulationOutput out = run_simulation(c);
    benchmark::DoNotOptimize(out.final_ledger.total());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.resolved_transactions()));
}
BENCHMARK(BM_RunSimulation)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_Gini(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> dist(1e-3);
  std::vector<double> money(static_cast<std::size_t>(state.range(0)));
  for (double& m : money) m = dist(rng);
  for (auto _ : state) benchmark::DoNotOptimize(gini(money));
}
BENCHMARK(BM_Gini)->Arg(500)->Arg(5000);

static void BM_PowerSpectrum(benchmark::State& state) {
  const Trajectory t = trajectory({0.5, 0.3}, BimapParams(1.032, 1.032), 1000, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> xs = x_series(t);
  for (auto _ : state) {
    Spectrum s = power_spectrum(xs);
    benchmark::DoNotOptimize(s.magnitudes.data());
  }
}
BENCHMARK(BM_PowerSpectrum)->Arg(4096)->Arg(5000);

BENCHMARK_MAIN();

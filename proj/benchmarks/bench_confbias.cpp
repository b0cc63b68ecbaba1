#include <benchmark/benchmark.h>

#include <vector>

#include "confbias/models.hpp"
#include "confbias/montecarlo.hpp"
#include "confbias/rng.hpp"
#include "confbias/special.hpp"

using namespace confbias;

static void BM_NormalDraws(benchmark::State& state) {
  SplitMix64 rng(1);
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < 1024; ++i) acc += rng.normal();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_NormalDraws);

static void BM_WeightedMean(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const BiasModel m = Exponential{0.5};
  const std::vector<double> sample = draw_sample(m, 1.0, n, 7, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(weighted_mean_estimate(sample, m, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_WeightedMean)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

static void BM_SweetSpotMle(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const BiasModel m = SweetSpot{1.0};
  const std::vector<double> sample = draw_sample(m, 1.0, n, 7, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(mle_estimate(sample, m, 1.0));
}
BENCHMARK(BM_SweetSpotMle)->Arg(1 << 10)->Arg(1 << 14);

static void BM_AppendixIntegrals(benchmark::State& state) {
  double beta = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(I1(beta) + I2(beta));
    beta = beta < 100.0 ? beta * 1.1 : 1e-3;
  }
}
BENCHMARK(BM_AppendixIntegrals);

static void BM_NewtonSolve(benchmark::State& state) {
  const BiasModel m = ConstantVariance{1.0, 2.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(newton_solve(m, 1.0).lambda);
}
BENCHMARK(BM_NewtonSolve);

static void BM_RunMc(benchmark::State& state) {
  McPlan plan;
  plan.replications = 32;
  plan.n = 4096;
  plan.seed = 3;
  plan.model = Exponential{0.5};
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_mc(plan, threads).mean);
}
BENCHMARK(BM_RunMc)->Arg(1)->Arg(4);

BENCHMARK_MAIN();

#include "refund/badnews.hpp"
#include "refund/optimizer.hpp"
#include "refund/postpurchase.hpp"
#include "refund/sim.hpp"

#include <benchmark/benchmark.h>

using namespace refund;

namespace {
const ModelParams kCanon{1.0, 0.1, 1.0, 1.0, 1.0};
}

static void BM_ValueProfile(benchmark::State& state) {
    for (auto _ : state) {
        ValueProfile profile(0.5, kCanon);
        benchmark::DoNotOptimize(profile.value(0.35));
    }
}
BENCHMARK(BM_ValueProfile);

static void BM_InteriorBeta(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(interior_beta(0.45, kCanon));
}
BENCHMARK(BM_InteriorBeta);

static void BM_OptimalMechanism(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(optimal_mechanism(0.5, kCanon).revenue);
}
BENCHMARK(BM_OptimalMechanism);

static void BM_RegionMap(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(region_map(kCanon, 256).c_star);
}
BENCHMARK(BM_RegionMap);

static void BM_AlphaMax(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(alpha_max(0.5, kCanon));
}
BENCHMARK(BM_AlphaMax);

static void BM_FiniteLambdaRevenue(benchmark::State& state) {
    ModelParams p = kCanon;
    p.lambda_post = 4.0;
    for (auto _ : state) benchmark::DoNotOptimize(finite_lambda_revenue(0.5, 0.5, p));
}
BENCHMARK(BM_FiniteLambdaRevenue);

static void BM_DpBestResponse(benchmark::State& state) {
    SimConfig cfg;
    cfg.grid_n = static_cast<int>(state.range(0));
    cfg.dt = 1e-3;
    const RefundMechanism m = return_policy_for(0.3, 0.5, kCanon);
    for (auto _ : state) benchmark::DoNotOptimize(dp_best_response(m, 0.5, kCanon, cfg).stop_belief);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DpBestResponse)->RangeMultiplier(4)->Range(1000, 64000)->Complexity();

static void BM_SimulatePaths(benchmark::State& state) {
    SimConfig cfg;
    cfg.n_paths = state.range(0);
    const RefundMechanism m = return_policy_for(0.3, 0.5, kCanon);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_paths(m, 0.3, 0.5, kCanon, cfg).empirical_revenue);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePaths)->RangeMultiplier(10)->Range(1000, 100000);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <vector>

#include "o2gasket/oracle.hpp"
#include "o2gasket/series.hpp"
#include "o2gasket/special.hpp"
#include "o2gasket/walks.hpp"
#include "o2gasket/weights.hpp"

using namespace o2gasket;

namespace {

static void BM_Digamma(benchmark::State& state) {
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(digamma(x));
        x += 0.618;
        if (x > 400.0) x -= 399.5;
    }
}
BENCHMARK(BM_Digamma);

static void BM_PolePairSum(benchmark::State& state) {
    double a = -0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pole_pair_sum(a, a + 1.5));
        a += 0.25;
        if (a > 20.0) a = -0.5;
    }
}
BENCHMARK(BM_PolePairSum);

static void BM_NuValueClosed(benchmark::State& state) {
    const long long J = state.range(0);
    std::vector<double> g(static_cast<size_t>(J), 0.0);
    g[static_cast<size_t>(J - 1)] = 0.9 / double(J);
    const GSequence seq(g);
    long long k = -1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nu_value(seq, k).value);
        k = (k - 7) % 500;
    }
}
BENCHMARK(BM_NuValueClosed)->Arg(4)->Arg(64)->Arg(512);

static void BM_NuWindow(benchmark::State& state) {
    const auto nu = NuDistribution::builtin_fully_packed();
    const long long half = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nu.window(-half, half));
    }
    state.SetItemsProcessed(state.iterations() * (2 * half + 1));
}
BENCHMARK(BM_NuWindow)->Arg(1024)->Arg(16384);

static void BM_DirectNuEvaluator(benchmark::State& state) {
    oracle::DirectNuEvaluator direct(GSequence::zero(), state.range(0));
    long long k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(direct.value(k).value);
        k = (k + 3) % 40 - 20;
    }
}
BENCHMARK(BM_DirectNuEvaluator)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_AliasSampler(benchmark::State& state) {
    const auto sym = NuDistribution::builtin_symmetric();
    AliasSampler s(sym, 8192, 1e-3);
    rng::Xoshiro256pp gen(99);
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.sample(gen));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AliasSampler);

static void BM_LadderWalks(benchmark::State& state) {
    const auto sym = NuDistribution::builtin_symmetric();
    WalkConfig cfg;
    cfg.n_walks = state.range(0);
    cfg.horizon = 10'000;
    cfg.support_cut = 8192;
    cfg.workers = 1;
    const AliasSampler s = build_sampler(sym, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_ladders(s, cfg));
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_walks);
}
BENCHMARK(BM_LadderWalks)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_AscLadderSeries(benchmark::State& state) {
    const auto g = builtin_example(Builtin::fully_packed).g;
    for (auto _ : state) {
        benchmark::DoNotOptimize(asc_ladder_series(g, state.range(0)));
    }
}
BENCHMARK(BM_AscLadderSeries)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_HDownTable(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(h_down_table(state.range(0)));
    }
}
BENCHMARK(BM_HDownTable)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();

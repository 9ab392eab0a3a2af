// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
//
// Worst-case transition solves across distribution sizes. The TV dual should
// track the n log n cost of its sort; KL and chi2 are O(n) per inner step of
// a one-dimensional search; the Wasserstein dual is O(n^2) in the metric.
#include <benchmark/benchmark.h>

#include "rmg/transition_duals.hpp"
#include "rmg/types.hpp"

using namespace rmg;

namespace {

struct Triple {
    numvec v, pbar, rho;
};

Triple make_triple(size_t n, bool with_metric) {
    RNG rng(17 + n);
    Triple t;
    t.pbar = random_distribution(rng, n);
    t.v.resize(n);
    for (auto& x : t.v) x = rng.uniform(-1.0, 1.0);
    if (with_metric) {
        numvec points(n);
        for (size_t i = 0; i < n; i++) points[i] = static_cast<prec_t>(i) + rng.u01();
        t.rho.assign(n * n, 0.0);
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; j < n; j++) t.rho[i * n + j] = std::abs(points[i] - points[j]);
    }
    return t;
}

void BM_dual_tv(benchmark::State& state) {
    const auto t = make_triple(static_cast<size_t>(state.range(0)), false);
    for (auto _ : state) benchmark::DoNotOptimize(duals::worst_case_tv(t.v, t.pbar, 0.3));
    state.SetComplexityN(state.range(0));
}

void BM_dual_kl(benchmark::State& state) {
    const auto t = make_triple(static_cast<size_t>(state.range(0)), false);
    for (auto _ : state) benchmark::DoNotOptimize(duals::worst_case_kl(t.v, t.pbar, 0.2));
    state.SetComplexityN(state.range(0));
}

void BM_dual_chi2(benchmark::State& state) {
    const auto t = make_triple(static_cast<size_t>(state.range(0)), false);
    for (auto _ : state) benchmark::DoNotOptimize(duals::worst_case_chi2(t.v, t.pbar, 0.2));
    state.SetComplexityN(state.range(0));
}

void BM_dual_wasserstein(benchmark::State& state) {
    const auto t = make_triple(static_cast<size_t>(state.range(0)), true);
    for (auto _ : state)
        benchmark::DoNotOptimize(duals::worst_case_wasserstein(t.v, t.pbar, 0.3, t.rho));
    state.SetComplexityN(state.range(0));
}

/// Baseline for the TV dual: the stable sort it is built around.
void BM_sort_indexes(benchmark::State& state) {
    const auto t = make_triple(static_cast<size_t>(state.range(0)), false);
    for (auto _ : state) benchmark::DoNotOptimize(sort_indexes_stable(t.v));
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK(BM_dual_tv)->RangeMultiplier(8)->Range(8, 1 << 17)->Complexity(benchmark::oNLogN);
BENCHMARK(BM_sort_indexes)
    ->RangeMultiplier(8)
    ->Range(8, 1 << 17)
    ->Complexity(benchmark::oNLogN);
BENCHMARK(BM_dual_kl)->RangeMultiplier(8)->Range(8, 1 << 14)->Complexity(benchmark::oN);
BENCHMARK(BM_dual_chi2)->RangeMultiplier(8)->Range(8, 1 << 14)->Complexity(benchmark::oN);
BENCHMARK(BM_dual_wasserstein)->RangeMultiplier(4)->Range(4, 1 << 8);

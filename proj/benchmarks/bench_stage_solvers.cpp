// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
//
// Regularized stage games across action counts and temperatures.
#include <benchmark/benchmark.h>

#include "rmg/generators.hpp"
#include "rmg/stage_solvers.hpp"
#include "rmg/types.hpp"

using namespace rmg;

namespace {

void BM_saddle_bilinear(benchmark::State& state) {
    RNG rng(5);
    const size_t n = static_cast<size_t>(state.range(0));
    const Matrix M = gen::random_matrix(rng, n, n);
    const auto none = stage::Regularizer::none();
    for (auto _ : state)
        benchmark::DoNotOptimize(stage::solve_zs_regularized(M, none, none, 1e-6));
}

void BM_saddle_entropic(benchmark::State& state) {
    RNG rng(5);
    const size_t n = static_cast<size_t>(state.range(0));
    const prec_t tau = static_cast<prec_t>(state.range(1)) / 100.0;
    const Matrix M = gen::random_matrix(rng, n, n);
    const auto reg = stage::Regularizer::shannon(tau);
    for (auto _ : state)
        benchmark::DoNotOptimize(stage::solve_zs_regularized(M, reg, reg, 1e-6));
}

void BM_regularized_br(benchmark::State& state) {
    RNG rng(9);
    const size_t n = static_cast<size_t>(state.range(0));
    numvec v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    const auto reg = stage::Regularizer::pnorm(0.2, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(stage::best_response_regularized(v, reg));
}

} // namespace

BENCHMARK(BM_saddle_bilinear)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_saddle_entropic)
    ->Args({4, 10})
    ->Args({4, 50})
    ->Args({8, 10})
    ->Args({8, 50})
    ->Args({16, 10});
BENCHMARK(BM_regularized_br)->RangeMultiplier(4)->Range(4, 1 << 10);

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
//
// End-to-end planning across instance sizes.
#include <benchmark/benchmark.h>

#include "rmg/generators.hpp"
#include "rmg/planner.hpp"
#include "rmg/types.hpp"

using namespace rmg;

namespace {

RMGInstance decomposable(int states, int actions, int horizon) {
    gen::InstanceConfig cfg;
    cfg.num_states = states;
    cfg.num_actions = {actions, actions};
    cfg.horizon = horizon;
    cfg.zero_sum = true;
    cfg.aligned_offset = true;
    cfg.reward_family = "kernel";
    cfg.kernel = KernelKind::shannon;
    cfg.tau = 0.1;
    RNG rng(23);
    return gen::random_instance(rng, cfg);
}

void BM_plan_actions(benchmark::State& state) {
    const RMGInstance inst =
        decomposable(5, static_cast<int>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(plan::solve_tpzs_rmg(inst, 1e-4));
}

void BM_plan_states(benchmark::State& state) {
    const RMGInstance inst =
        decomposable(static_cast<int>(state.range(0)), 4, 5);
    for (auto _ : state) benchmark::DoNotOptimize(plan::solve_tpzs_rmg(inst, 1e-4));
}

void BM_plan_horizon(benchmark::State& state) {
    const RMGInstance inst =
        decomposable(5, 4, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(plan::solve_tpzs_rmg(inst, 1e-4));
}

void BM_robust_eval(benchmark::State& state) {
    gen::InstanceConfig cfg;
    cfg.num_states = static_cast<int>(state.range(0));
    cfg.num_actions = {4, 4};
    cfg.horizon = 5;
    cfg.reward_family = "interval";
    cfg.transition_family = "tv";
    cfg.radius = 0.2;
    RNG rng(29);
    const RMGInstance inst = gen::random_instance(rng, cfg);
    const Policy policy = random_policy(inst, 31);
    for (auto _ : state) benchmark::DoNotOptimize(plan::robust_policy_eval(inst, policy));
}

} // namespace

BENCHMARK(BM_plan_actions)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_plan_states)->Arg(2)->Arg(5)->Arg(10);
BENCHMARK(BM_plan_horizon)->Arg(2)->Arg(5)->Arg(10);
BENCHMARK(BM_robust_eval)->Arg(2)->Arg(8)->Arg(32);

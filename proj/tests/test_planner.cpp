// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "rmg/generators.hpp"
#include "rmg/planner.hpp"
#include "rmg/reductions.hpp"

using namespace rmg;

namespace {

/// Plain Shapley backward induction on the nominal model, written directly
/// against the stage saddle solver; reference for the zero-radius planner.
std::vector<numvec> nominal_shapley(const RMGInstance& inst, prec_t stage_eps) {
    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);
    const size_t n1 = static_cast<size_t>(inst.num_actions[0]);
    const size_t n2 = static_cast<size_t>(inst.num_actions[1]);
    std::vector<numvec> values(H, numvec(S, 0.0));
    numvec vnext(S, 0.0);
    for (int h = static_cast<int>(H) - 1; h >= 0; h--) {
        numvec vcur(S, 0.0);
        for (size_t s = 0; s < S; s++) {
            Matrix M(n1, n2);
            for (size_t a = 0; a < n1; a++)
                for (size_t b = 0; b < n2; b++) {
                    const size_t k = a * n2 + b;
                    prec_t entry = inst.rewards[0][h][s][k];
                    if (h + 1 < static_cast<int>(H))
                        entry += dot(inst.transitions[h][s][k], vnext);
                    M(a, b) = entry;
                }
            const auto saddle = stage::solve_zs_regularized(
                M, stage::Regularizer::none(), stage::Regularizer::none(), stage_eps);
            vcur[s] = saddle.value;
        }
        values[h] = vcur;
        vnext = vcur;
    }
    return values;
}

gen::InstanceConfig decomposable_config(const std::string& family) {
    gen::InstanceConfig cfg;
    cfg.num_states = 2;
    cfg.num_actions = {3, 3};
    cfg.horizon = 3;
    cfg.zero_sum = true;
    cfg.aligned_offset = true;
    if (family == "kernel") {
        cfg.reward_family = "kernel";
        cfg.kernel = KernelKind::shannon;
        cfg.tau = 0.1;
    } else {
        cfg.reward_family = "opnorm";
        cfg.alpha = 0.2;
        cfg.opnorm_p = 2.0;
        cfg.opnorm_q = 1.0;
    }
    return cfg;
}

} // namespace

TEST_SUITE("planner") {

TEST_CASE("nominal eval: constant-reward chain accumulates c * H") {
    RMGInstance inst;
    inst.num_players = 2;
    inst.num_states = 1;
    inst.num_actions = {2, 2};
    inst.horizon = 4;
    const prec_t c = 0.3;
    inst.rewards.assign(2, std::vector<std::vector<numvec>>(
                               4, std::vector<numvec>(1, numvec(4, c))));
    inst.transitions.assign(3,
                            std::vector<std::vector<numvec>>(1, std::vector<numvec>(4, {1.0})));
    const Policy pol = random_policy(inst, 3);
    const auto res = plan::nominal_policy_eval(inst, pol);
    CHECK(res.initial[0] == doctest::Approx(4.0 * c).epsilon(1e-13));
    CHECK(res.initial[1] == doctest::Approx(4.0 * c).epsilon(1e-13));
}

TEST_CASE("nominal eval matches the bilinear form at horizon 1") {
    RNG rng(7);
    const Matrix A = gen::random_matrix(rng, 3, 2);
    const Matrix B = gen::random_matrix(rng, 3, 2);
    const RMGInstance inst = gen::bimatrix_instance(A, B);
    for (int t = 0; t < 10; t++) {
        const Policy pol = random_policy(inst, 100 + t);
        const auto res = plan::nominal_policy_eval(inst, pol);
        CHECK(res.initial[0] ==
              doctest::Approx(A.quad(pol[0][0][0], pol[1][0][0])).epsilon(1e-13));
        CHECK(res.initial[1] ==
              doctest::Approx(B.quad(pol[0][0][0], pol[1][0][0])).epsilon(1e-13));
    }
}

TEST_CASE("robust eval equals nominal eval without uncertainty") {
    gen::InstanceConfig cfg;
    cfg.num_states = 3;
    cfg.num_actions = {2, 3};
    cfg.horizon = 3;
    for (uint64_t seed = 0; seed < 5; seed++) {
        RNG rng(seed);
        const RMGInstance inst = gen::random_instance(rng, cfg);
        const Policy pol = random_policy(inst, seed + 50);
        const auto robust = plan::robust_policy_eval(inst, pol);
        const auto nominal = plan::nominal_policy_eval(inst, pol);
        for (int i = 0; i < 2; i++)
            CHECK(robust.initial[i] == doctest::Approx(nominal.initial[i]).epsilon(1e-12));
    }
}

TEST_CASE("robust value never exceeds nominal for zero-containing sets") {
    // Interval bounds straddle zero, opnorm balls and transition balls are
    // centered at the nominal, so the nominal model is always feasible for
    // the adversary. (Kernel penalties are excluded: their support value can
    // be negative by design.)
    const struct {
        const char* reward;
        const char* transition;
    } combos[] = {{"interval", "none"}, {"opnorm", "none"}, {"none", "tv"},
                  {"none", "wasserstein"}, {"interval", "lp_ball"}, {"none", "chi2"}};
    uint64_t seed = 400;
    for (const auto& combo : combos) {
        CAPTURE(combo.reward);
        CAPTURE(combo.transition);
        for (int t = 0; t < 10; t++) {
            gen::InstanceConfig cfg;
            cfg.num_states = 2;
            cfg.num_actions = {2, 2};
            cfg.horizon = 3;
            cfg.reward_family = combo.reward;
            cfg.transition_family = combo.transition;
            if (std::string(combo.transition) == "lp_ball")
                cfg.rectangularity = TransitionUncertainty::Rect::s;
            RNG rng(seed++);
            const RMGInstance inst = gen::random_instance(rng, cfg);
            const Policy pol = random_policy(inst, seed * 13);
            const auto robust = plan::robust_policy_eval(inst, pol);
            const auto nominal = plan::nominal_policy_eval(inst, pol);
            for (int i = 0; i < 2; i++)
                CHECK(robust.initial[i] <= nominal.initial[i] + 1e-10);
        }
    }
}

TEST_CASE("evaluation satisfies the stage recursion") {
    gen::InstanceConfig cfg;
    cfg.num_states = 3;
    cfg.num_actions = {3, 2};
    cfg.horizon = 3;
    cfg.reward_family = "interval";
    cfg.transition_family = "tv";
    RNG rng(600);
    const RMGInstance inst = gen::random_instance(rng, cfg);
    const Policy pol = random_policy(inst, 601);
    const auto res = plan::robust_policy_eval(inst, pol);

    for (int i = 0; i < 2; i++)
        for (int h = 0; h < inst.horizon; h++)
            for (int s = 0; s < inst.num_states; s++) {
                const numvec vnext =
                    h + 1 < inst.horizon ? res.values[i][h + 1] : numvec{};
                const prec_t q = plan::robust_stage_q(inst, i, h, s, pol, vnext);
                CHECK(res.values[i][h][s] == doctest::Approx(q).epsilon(1e-11));
            }
}

TEST_CASE("best response dominates fixed alternatives and defines the gap") {
    gen::InstanceConfig cfg;
    cfg.num_states = 2;
    cfg.num_actions = {2, 3};
    cfg.horizon = 3;
    cfg.reward_family = "interval";
    cfg.transition_family = "tv";
    for (uint64_t seed = 700; seed < 705; seed++) {
        RNG rng(seed);
        const RMGInstance inst = gen::random_instance(rng, cfg);
        const Policy pol = random_policy(inst, seed + 1);
        const auto eval = plan::robust_policy_eval(inst, pol);
        const auto gap = plan::rne_gap(inst, pol);
        CAPTURE(seed);
        CHECK(gap.max_gap >= -1e-8);
        for (int i = 0; i < 2; i++) {
            const auto br = plan::robust_best_response(inst, i, pol);
            // The reported gap is exactly the best-response improvement.
            CHECK(gap.per_player[i] ==
                  doctest::Approx(br.initial - eval.initial[i]).epsilon(1e-11));
            // No fixed alternative for player i can beat the best response.
            for (int t = 0; t < 5; t++) {
                Policy alt = pol;
                alt[i] = random_policy(inst, seed * 31 + t)[i];
                const auto alt_eval = plan::robust_policy_eval(inst, alt);
                CHECK(alt_eval.initial[i] <= br.initial + 1e-9);
            }
        }
    }
}

TEST_CASE("support-function and realized-model evaluations coincide") {
    const struct {
        const char* reward;
        const char* transition;
    } combos[] = {
        {"singleton", "none"}, {"interval", "none"},     {"opnorm", "none"},
        {"kernel", "none"},    {"singleton", "tv"},      {"none", "kl"},
        {"none", "chi2"},      {"none", "wasserstein"},  {"interval", "lp_ball"},
        {"interval", "tv"},
    };
    uint64_t seed = 800;
    for (const auto& combo : combos) {
        CAPTURE(combo.reward);
        CAPTURE(combo.transition);
        for (int t = 0; t < 3; t++) {
            gen::InstanceConfig cfg;
            cfg.num_states = 3;
            cfg.num_actions = {3, 2};
            cfg.horizon = 3;
            cfg.reward_family = combo.reward;
            cfg.transition_family = combo.transition;
            if (std::string(combo.transition) == "lp_ball")
                cfg.rectangularity = TransitionUncertainty::Rect::s;
            RNG rng(seed++);
            const RMGInstance inst = gen::random_instance(rng, cfg);
            for (int p = 0; p < 2; p++) {
                const Policy pol = random_policy(inst, seed * 7 + p);
                const auto res = plan::equivalence_check(inst, pol);
                const prec_t tol = plan::has_iterative_duals(inst) ? 1e-6 : 1e-9;
                CHECK(res.max_diff <= tol);
            }
        }
    }

    // Singleton-only instances must agree to machine precision.
    gen::InstanceConfig cfg;
    cfg.reward_family = "singleton";
    RNG rng(900);
    const RMGInstance inst = gen::random_instance(rng, cfg);
    const auto res = plan::equivalence_check(inst, random_policy(inst, 901));
    CHECK(res.max_diff <= 1e-12);
}

TEST_CASE("equivalence check rejects descriptors without realizations") {
    gen::InstanceConfig cfg;
    cfg.reward_family = "kernel";
    cfg.kernel = KernelKind::renyi;
    RNG rng(950);
    const RMGInstance renyi = gen::random_instance(rng, cfg);
    CHECK_THROWS_AS(plan::equivalence_check(renyi, uniform_policy(renyi)),
                    std::invalid_argument);

    const RMGInstance aligned = [] {
        gen::InstanceConfig c = decomposable_config("kernel");
        RNG r(951);
        return gen::random_instance(r, c);
    }();
    CHECK_THROWS_AS(plan::equivalence_check(aligned, uniform_policy(aligned)),
                    std::invalid_argument);
}

TEST_CASE("has_iterative_duals flags kl and chi2 only") {
    gen::InstanceConfig cfg;
    for (const char* fam : {"tv", "kl", "chi2", "wasserstein"}) {
        cfg.transition_family = fam;
        RNG rng(970);
        const RMGInstance inst = gen::random_instance(rng, cfg);
        const bool expect = std::string(fam) == "kl" || std::string(fam) == "chi2";
        CHECK(plan::has_iterative_duals(inst) == expect);
    }
}

TEST_CASE("zero-sum planner solves matching pennies") {
    RMGInstance inst = gen::matching_pennies();
    const auto res = plan::solve_tpzs_rmg(inst, 1e-8);
    CHECK(res.certified);
    CHECK(res.values[0][0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(res.gap.max_gap <= 1e-8);
    CHECK(res.policy[0][0][0][0] == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("zero-radius robust planning reproduces nominal backward induction") {
    gen::InstanceConfig cfg;
    cfg.num_states = 3;
    cfg.num_actions = {2, 3};
    cfg.horizon = 3;
    cfg.zero_sum = true;
    cfg.transition_family = "tv";
    cfg.radius = 0.0;
    for (uint64_t seed = 0; seed < 5; seed++) {
        RNG rng(seed);
        const RMGInstance inst = gen::random_instance(rng, cfg);
        REQUIRE(inst.has_transition_uncertainty());
        const auto res = plan::solve_tpzs_rmg(inst, 1e-9);
        const auto ref = nominal_shapley(inst, 1e-9 / (2.0 * inst.horizon));
        CAPTURE(seed);
        for (int h = 0; h < inst.horizon; h++)
            for (int s = 0; s < inst.num_states; s++)
                CHECK(res.values[h][s] == doctest::Approx(ref[h][s]).epsilon(1e-10));
    }
}

TEST_CASE("horizon-1 planning is the matrix saddle") {
    RNG rng(33);
    for (int t = 0; t < 5; t++) {
        const Matrix A = gen::random_matrix(rng, 3, 3);
        Matrix B = A;
        for (prec_t& x : B.data) x = -x;
        RMGInstance inst = gen::bimatrix_instance(A, B);
        inst.zero_sum = true;
        validate_instance(inst);
        const auto res = plan::solve_tpzs_rmg(inst, 1e-9);
        const auto saddle = stage::solve_zs_regularized(
            A, stage::Regularizer::none(), stage::Regularizer::none(), 1e-11);
        CAPTURE(t);
        CHECK(res.values[0][0] == doctest::Approx(saddle.value).epsilon(1e-9));
        CHECK(res.certified);
    }
}

TEST_CASE("decomposable instances are planned and certified") {
    for (const char* family : {"kernel", "opnorm"}) {
        CAPTURE(family);
        // The entropic stage prox converges faster than the p-norm gradient
        // path, so the kernel family gets a tighter target.
        const prec_t eps = std::string(family) == "kernel" ? 1e-5 : 1e-4;
        for (uint64_t seed = 1; seed <= 3; seed++) {
            gen::InstanceConfig cfg = decomposable_config(family);
            RNG rng(seed);
            const RMGInstance inst = gen::random_instance(rng, cfg);
            const auto res = plan::solve_tpzs_rmg(inst, eps);
            CAPTURE(seed);
            CHECK(res.certified);
            CHECK(res.gap.max_gap <= eps);
            // Aligned offsets keep the game exactly zero-sum.
            CHECK(std::abs(res.initial[0] + res.initial[1]) <= 1e-9);
        }
    }
}

TEST_CASE("planner values are solver-order independent within tolerance") {
    gen::InstanceConfig cfg = decomposable_config("kernel");
    RNG rng(77);
    const RMGInstance inst = gen::random_instance(rng, cfg);
    const prec_t eps = 1e-5;
    const auto a = plan::solve_tpzs_rmg(inst, eps);
    const auto b = plan::solve_tpzs_rmg(inst, eps / 10.0);
    CHECK(std::abs(a.values[0][0] - b.values[0][0]) <= 10.0 * eps);
}

TEST_CASE("zero-sum planner refuses what it cannot certify") {
    // Not zero-sum.
    gen::InstanceConfig cfg;
    RNG rng(21);
    const RMGInstance gs = gen::random_instance(rng, cfg);
    CHECK_THROWS_WITH_AS(plan::solve_tpzs_rmg(gs, 1e-6),
                         doctest::Contains("solve_small_general_sum_rmg"),
                         std::invalid_argument);

    // Interval rewards do not separate per player.
    cfg.zero_sum = true;
    cfg.reward_family = "interval";
    RNG rng2(22);
    const RMGInstance iv = gen::random_instance(rng2, cfg);
    CHECK_THROWS_WITH_AS(plan::solve_tpzs_rmg(iv, 1e-6),
                         doctest::Contains("does not separate"), std::invalid_argument);

    // Kernel rewards without aligned offsets break the zero-sum pairing.
    cfg.reward_family = "kernel";
    cfg.aligned_offset = false;
    RNG rng3(23);
    const RMGInstance ka = gen::random_instance(rng3, cfg);
    CHECK_THROWS_WITH_AS(plan::solve_tpzs_rmg(ka, 1e-6),
                         doctest::Contains("offset-aligned"), std::invalid_argument);

    // s-rectangular transition balls are outside the fast path.
    cfg.reward_family = "none";
    cfg.transition_family = "lp_ball";
    cfg.rectangularity = TransitionUncertainty::Rect::s;
    RNG rng4(24);
    const RMGInstance sb = gen::random_instance(rng4, cfg);
    CHECK_THROWS_WITH_AS(plan::solve_tpzs_rmg(sb, 1e-6),
                         doctest::Contains("s-rectangular"), std::invalid_argument);

    // Three players.
    gen::InstanceConfig cfg3;
    cfg3.num_players = 3;
    cfg3.num_actions = {2, 2, 2};
    RNG rng5(25);
    const RMGInstance three = gen::random_instance(rng5, cfg3);
    CHECK_THROWS_WITH_AS(plan::solve_tpzs_rmg(three, 1e-6),
                         doctest::Contains("exactly two players"), std::invalid_argument);
}

TEST_CASE("general-sum solver: prisoners dilemma stays defect over two steps") {
    RMGInstance inst = gen::prisoners_dilemma();
    // Extend to horizon 2 on the single state.
    inst.horizon = 2;
    for (int i = 0; i < 2; i++) inst.rewards[i].push_back(inst.rewards[i][0]);
    inst.transitions.assign(1, std::vector<std::vector<numvec>>(
                                   1, std::vector<numvec>(4, {1.0})));
    validate_instance(inst);
    const auto res = plan::solve_small_general_sum_rmg(inst, 1e-8);
    CHECK(res.certified);
    CHECK(res.gap.max_gap <= 1e-8);
    for (int i = 0; i < 2; i++)
        for (int h = 0; h < 2; h++) CHECK(res.policy[i][h][0][1] == doctest::Approx(1.0));
    CHECK(res.initial[0] == doctest::Approx(-4.0).epsilon(1e-10));
}

TEST_CASE("general-sum solver handles interval uncertainty exactly") {
    gen::InstanceConfig cfg;
    cfg.num_states = 2;
    cfg.num_actions = {3, 3};
    cfg.horizon = 2;
    cfg.reward_family = "interval";
    for (uint64_t seed = 31; seed < 36; seed++) {
        RNG rng(seed);
        const RMGInstance inst = gen::random_instance(rng, cfg);
        const auto res = plan::solve_small_general_sum_rmg(inst, 1e-6);
        CAPTURE(seed);
        CHECK(res.certified);
        CHECK(res.gap.max_gap <= 1e-6);
    }
}

TEST_CASE("general-sum solver refusals") {
    gen::InstanceConfig cfg;
    cfg.num_actions = {5, 5};
    RNG rng(41);
    const RMGInstance big = gen::random_instance(rng, cfg);
    CHECK_THROWS_WITH_AS(plan::solve_small_general_sum_rmg(big, 1e-6),
                         doctest::Contains("at most"), std::invalid_argument);

    gen::InstanceConfig cfg2;
    cfg2.transition_family = "tv";
    RNG rng2(42);
    const RMGInstance tu = gen::random_instance(rng2, cfg2);
    CHECK_THROWS_WITH_AS(plan::solve_small_general_sum_rmg(tu, 1e-6),
                         doctest::Contains("reward uncertainty only"),
                         std::invalid_argument);

    gen::InstanceConfig cfg3;
    cfg3.reward_family = "opnorm";
    RNG rng3(43);
    const RMGInstance op = gen::random_instance(rng3, cfg3);
    CHECK_THROWS_AS(plan::solve_small_general_sum_rmg(op, 1e-6), std::invalid_argument);
}

} // TEST_SUITE("planner")

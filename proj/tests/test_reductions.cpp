// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rmg/generators.hpp"
#include "rmg/planner.hpp"
#include "rmg/reductions.hpp"
#include "rmg/transition_duals.hpp"

using namespace rmg;

TEST_SUITE("reductions") {

TEST_CASE("bimatrix_gap pins") {
    // Battle of the sexes, miscoordinated pure profile: each player gains 1
    // by deviating.
    const Matrix A(2, 2, {2.0, 0.0, 0.0, 1.0});
    const Matrix B(2, 2, {1.0, 0.0, 0.0, 2.0});
    const numvec gap = reduce::bimatrix_gap(A, B, {1.0, 0.0}, {0.0, 1.0});
    CHECK(gap[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gap[1] == doctest::Approx(1.0).epsilon(1e-14));

    // Equilibria have zero gap.
    const numvec eq = reduce::bimatrix_gap(A, B, {1.0, 0.0}, {1.0, 0.0});
    CHECK(eq[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eq[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("bimatrix_gap is invariant under per-matrix constant shifts") {
    RNG rng(3);
    for (int t = 0; t < 50; t++) {
        const size_t n1 = 2 + rng.index(4), n2 = 2 + rng.index(4);
        const Matrix A = gen::random_matrix(rng, n1, n2);
        const Matrix B = gen::random_matrix(rng, n1, n2);
        Matrix As = A, Bs = B;
        const prec_t ca = rng.uniform(-3.0, 3.0), cb = rng.uniform(-3.0, 3.0);
        for (prec_t& v : As.data) v += ca;
        for (prec_t& v : Bs.data) v += cb;
        const numvec x = random_distribution(rng, n1);
        const numvec y = random_distribution(rng, n2);
        const numvec g0 = reduce::bimatrix_gap(A, B, x, y);
        const numvec g1 = reduce::bimatrix_gap(As, Bs, x, y);
        CHECK(g0[0] == doctest::Approx(g1[0]).epsilon(1e-12));
        CHECK(g0[1] == doctest::Approx(g1[1]).epsilon(1e-12));
    }
}

TEST_CASE("reward-variant reduction: per-player values and gaps carry over") {
    RNG rng(7);
    for (int game = 0; game < 10; game++) {
        const size_t n1 = 2 + rng.index(2), n2 = 2 + rng.index(2);
        const Matrix A = gen::random_matrix(rng, n1, n2);
        const Matrix B = gen::random_matrix(rng, n1, n2);
        const reduce::Reduction red = reduce::gensum_to_tpzs_reward(A, B);
        CAPTURE(game);

        for (int t = 0; t < 40; t++) {
            const numvec x = random_distribution(rng, n1);
            const numvec y = random_distribution(rng, n2);
            const Policy pol = reduce::lift_profile(red.instance, x, y);

            const auto eval = plan::robust_policy_eval(red.instance, pol);
            CHECK(eval.initial[0] + red.shift[0] ==
                  doctest::Approx(A.quad(x, y)).epsilon(1e-12));
            CHECK(eval.initial[1] + red.shift[1] ==
                  doctest::Approx(B.quad(x, y)).epsilon(1e-12));

            const auto gap = plan::rne_gap(red.instance, pol);
            const numvec bim = reduce::bimatrix_gap(A, B, x, y);
            CHECK(std::abs(gap.per_player[0] - bim[0]) <= 1e-10);
            CHECK(std::abs(gap.per_player[1] - bim[1]) <= 1e-10);
        }
    }
}

TEST_CASE("reward-variant reduction accepts zero-sum input") {
    RNG rng(11);
    const Matrix A = gen::random_matrix(rng, 3, 3);
    Matrix B = A;
    for (prec_t& v : B.data) v = -v;
    const reduce::Reduction red = reduce::gensum_to_tpzs_reward(A, B);
    for (int t = 0; t < 20; t++) {
        const numvec x = random_distribution(rng, 3);
        const numvec y = random_distribution(rng, 3);
        const Policy pol = reduce::lift_profile(red.instance, x, y);
        const auto gap = plan::rne_gap(red.instance, pol);
        const numvec bim = reduce::bimatrix_gap(A, B, x, y);
        CHECK(std::abs(gap.per_player[0] - bim[0]) <= 1e-10);
        CHECK(std::abs(gap.per_player[1] - bim[1]) <= 1e-10);
    }
}

TEST_CASE("one-by-one game reduces to a trivial certified instance") {
    const Matrix A(1, 1, {-0.7});
    const Matrix B(1, 1, {0.4});
    const reduce::Reduction red = reduce::gensum_to_tpzs_reward(A, B);
    const Policy pol = reduce::lift_profile(red.instance, {1.0}, {1.0});
    const auto eval = plan::robust_policy_eval(red.instance, pol);
    CHECK(eval.initial[0] + red.shift[0] == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(eval.initial[1] + red.shift[1] == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(plan::rne_gap(red.instance, pol).max_gap <= 1e-12);
}

TEST_CASE("transition-variant reduction: values carry over on lifted profiles") {
    RNG rng(13);
    for (int game = 0; game < 10; game++) {
        const Matrix A = gen::random_matrix(rng, 2, 2);
        const Matrix B = gen::random_matrix(rng, 2, 2);
        const reduce::Reduction red = reduce::gensum_to_tpzs_transition(A, B);
        CAPTURE(game);
        REQUIRE(red.instance.has_transition_uncertainty());

        for (int t = 0; t < 25; t++) {
            const numvec x = random_distribution(rng, 2);
            const numvec y = random_distribution(rng, 2);
            const Policy pol = reduce::lift_profile(red.instance, x, y);
            const auto eval = plan::robust_policy_eval(red.instance, pol);
            CHECK(eval.initial[0] + red.shift[0] ==
                  doctest::Approx(A.quad(x, y)).epsilon(1e-10));
            CHECK(eval.initial[1] + red.shift[1] ==
                  doctest::Approx(B.quad(x, y)).epsilon(1e-10));
        }
    }
}

TEST_CASE("transition-variant adversary routes each player to its bad state") {
    RNG rng(17);
    const Matrix A = gen::random_matrix(rng, 2, 2);
    const Matrix B = gen::random_matrix(rng, 2, 2);
    const reduce::Reduction red = reduce::gensum_to_tpzs_transition(A, B);
    const numvec x = random_distribution(rng, 2);
    const numvec y = random_distribution(rng, 2);
    const Policy pol = reduce::lift_profile(red.instance, x, y);
    const auto eval = plan::robust_policy_eval(red.instance, pol);

    const TransitionUncertainty* t = red.instance.transition_set(0, 0);
    REQUIRE(t != nullptr);
    for (int i = 0; i < 2; i++) {
        const numvec& vnext = eval.values[i][1];
        // Generic games: the two continuation values differ, and the TV ball
        // with radius one reaches the point mass on the smaller one.
        REQUIRE(std::abs(vnext[0] - vnext[1]) > 1e-9);
        const size_t bad = vnext[0] < vnext[1] ? 0 : 1;
        // Player 1's low state is where its step-1 reward is the nonpositive
        // sum term (state 0); player 2's is the mirrored state 1.
        CHECK(bad == static_cast<size_t>(i));
        const auto worst = duals::worst_case(*t, 0, vnext, {0.5, 0.5});
        CHECK(worst.worst[bad] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("lift_profile validates its inputs") {
    RNG rng(19);
    const Matrix A = gen::random_matrix(rng, 2, 3);
    const reduce::Reduction red = reduce::gensum_to_tpzs_reward(A, A);
    CHECK_THROWS_AS(reduce::lift_profile(red.instance, {1.0}, {0.5, 0.25, 0.25}),
                    std::invalid_argument);
    CHECK_THROWS_AS(reduce::lift_profile(red.instance, {0.5, 0.5}, {1.0, 0.0}),
                    std::invalid_argument);
    const Policy pol = reduce::lift_profile(red.instance, {0.5, 0.5}, {0.2, 0.3, 0.5});
    CHECK(pol[0].size() == 1);
    CHECK(pol[0][0].size() == 1);
}

} // TEST_SUITE("reductions")

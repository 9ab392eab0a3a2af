// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rmg/oracles.hpp"
#include "rmg/transition_duals.hpp"

using namespace rmg;
using duals::DualResult;

namespace {

numvec random_values(RNG& rng, size_t n, prec_t scale = 1.0) {
    numvec v(n);
    for (prec_t& x : v) x = rng.uniform(-scale, scale);
    return v;
}

/// Ground metric from random points on a line: symmetric, zero diagonal,
/// satisfies the triangle inequality.
numvec line_metric(RNG& rng, size_t n) {
    numvec t(n);
    for (prec_t& x : t) x = rng.uniform(0.0, 2.0);
    numvec rho(n * n, 0.0);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) rho[i * n + j] = std::abs(t[i] - t[j]);
    return rho;
}

prec_t tv_distance(const numvec& p, const numvec& q) {
    prec_t s = 0.0;
    for (size_t i = 0; i < p.size(); i++) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

prec_t chi2_distance(const numvec& p, const numvec& q) {
    prec_t s = 0.0;
    for (size_t i = 0; i < p.size(); i++) s += (p[i] - q[i]) * (p[i] - q[i]) / q[i];
    return s;
}

} // namespace

TEST_SUITE("transition_duals") {

TEST_CASE("tv worst case: frozen pin and greedy structure") {
    const DualResult r = duals::worst_case_tv({0.0, 1.0}, {0.5, 0.5}, 0.25);
    CHECK(r.value == doctest::Approx(-0.25).epsilon(1e-14));
    REQUIRE(r.worst.size() == 2);
    CHECK(r.worst[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(r.worst[1] == doctest::Approx(0.25).epsilon(1e-14));

    // Large radius saturates at the point mass on the smallest value.
    const DualResult big = duals::worst_case_tv({0.0, 1.0}, {0.5, 0.5}, 2.0);
    CHECK(big.value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(big.worst[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("kl worst case: frozen pin sits on the ball boundary") {
    const DualResult r = duals::worst_case_kl({0.0, 1.0}, {0.5, 0.5}, 0.1);
    CHECK(r.value == doctest::Approx(-0.280205).epsilon(2e-5));
    CHECK(kl_divergence(r.worst, {0.5, 0.5}) == doctest::Approx(0.1).epsilon(1e-4));
    CHECK(r.lambda > 0.0);
}

TEST_CASE("zero radius returns the nominal for every family") {
    RNG rng(5);
    for (size_t n : {2u, 3u, 5u}) {
        const numvec pbar = random_distribution(rng, n);
        const numvec v = random_values(rng, n);
        const numvec rho = line_metric(rng, n);
        const prec_t nominal = -dot(pbar, v);

        for (int fam = 0; fam < 4; fam++) {
            DualResult r;
            switch (fam) {
            case 0: r = duals::worst_case_tv(v, pbar, 0.0); break;
            case 1: r = duals::worst_case_kl(v, pbar, 0.0); break;
            case 2: r = duals::worst_case_chi2(v, pbar, 0.0); break;
            default: r = duals::worst_case_wasserstein(v, pbar, 0.0, rho); break;
            }
            CAPTURE(fam);
            CHECK(r.value == doctest::Approx(nominal).epsilon(1e-12));
            for (size_t i = 0; i < n; i++)
                CHECK(r.worst[i] == doctest::Approx(pbar[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("duals agree with independent oracles") {
    RNG rng(11);
    for (int trial = 0; trial < 60; trial++) {
        const size_t n = 2 + rng.index(2);  // |S| in {2, 3}
        const numvec pbar = random_distribution(rng, n);
        const numvec v = random_values(rng, n);
        const prec_t beta = rng.uniform(0.0, 0.8);
        const numvec rho = line_metric(rng, n);
        CAPTURE(trial);
        CAPTURE(n);
        CAPTURE(beta);

        CHECK(duals::worst_case_tv(v, pbar, beta).value ==
              doctest::Approx(oracle::tv_worst_lp(v, pbar, beta)).epsilon(1e-9));
        CHECK(duals::worst_case_chi2(v, pbar, beta).value ==
              doctest::Approx(oracle::chi2_worst_kkt(v, pbar, beta)).epsilon(1e-7));
        CHECK(duals::worst_case_wasserstein(v, pbar, beta, rho).value ==
              doctest::Approx(oracle::wasserstein_worst_lp(v, pbar, beta, rho))
                  .epsilon(1e-9));
        CHECK(duals::worst_case_kl(v, pbar, beta).value ==
              doctest::Approx(oracle::kl_worst_tilt(v, pbar, beta)).epsilon(1e-5));
    }
}

TEST_CASE("worst cases are feasible, attaining distributions") {
    RNG rng(13);
    for (int trial = 0; trial < 80; trial++) {
        const size_t n = 2 + rng.index(4);
        const numvec pbar = random_distribution(rng, n);
        const numvec v = random_values(rng, n);
        const prec_t beta = rng.uniform(0.0, 0.6);
        const numvec rho = line_metric(rng, n);
        CAPTURE(trial);

        const DualResult tv = duals::worst_case_tv(v, pbar, beta);
        CHECK(is_distribution(tv.worst, 1e-10));
        CHECK(tv_distance(tv.worst, pbar) <= beta + 1e-10);
        CHECK(-dot(tv.worst, v) == doctest::Approx(tv.value).epsilon(1e-10));

        const DualResult kl = duals::worst_case_kl(v, pbar, beta);
        CHECK(is_distribution(kl.worst, 1e-8));
        CHECK(kl_divergence(kl.worst, pbar) <= beta + 1e-6);
        CHECK(-dot(kl.worst, v) == doctest::Approx(kl.value).epsilon(1e-6));

        const DualResult c2 = duals::worst_case_chi2(v, pbar, beta);
        CHECK(is_distribution(c2.worst, 1e-8));
        CHECK(chi2_distance(c2.worst, pbar) <= beta + 1e-6);
        CHECK(-dot(c2.worst, v) == doctest::Approx(c2.value).epsilon(1e-6));

        const DualResult w1 = duals::worst_case_wasserstein(v, pbar, beta, rho);
        CHECK(is_distribution(w1.worst, 1e-10));
        CHECK(-dot(w1.worst, v) == doctest::Approx(w1.value).epsilon(1e-8));
        if (n == 2) {
            // In one dimension W1 has the closed form |p0 - pbar0| * rho(0,1).
            CHECK(std::abs(w1.worst[0] - pbar[0]) * rho[1] <= beta + 1e-8);
        }
    }
}

TEST_CASE("values are monotone in the radius and sandwiched") {
    RNG rng(17);
    for (int trial = 0; trial < 80; trial++) {
        const size_t n = 2 + rng.index(4);
        const numvec pbar = random_distribution(rng, n);
        const numvec v = random_values(rng, n);
        const numvec rho = line_metric(rng, n);
        const prec_t b1 = rng.uniform(0.0, 0.5);
        const prec_t b2 = b1 + rng.uniform(0.0, 0.5);
        const prec_t nominal = -dot(pbar, v);
        const prec_t best = -*std::min_element(v.begin(), v.end());
        CAPTURE(trial);

        for (int fam = 0; fam < 4; fam++) {
            DualResult lo, hi;
            switch (fam) {
            case 0:
                lo = duals::worst_case_tv(v, pbar, b1);
                hi = duals::worst_case_tv(v, pbar, b2);
                break;
            case 1:
                lo = duals::worst_case_kl(v, pbar, b1);
                hi = duals::worst_case_kl(v, pbar, b2);
                break;
            case 2:
                lo = duals::worst_case_chi2(v, pbar, b1);
                hi = duals::worst_case_chi2(v, pbar, b2);
                break;
            default:
                lo = duals::worst_case_wasserstein(v, pbar, b1, rho);
                hi = duals::worst_case_wasserstein(v, pbar, b2, rho);
                break;
            }
            CAPTURE(fam);
            // kl and chi2 values come from one-dimensional searches; allow
            // their tolerance in the comparisons.
            const prec_t slack = (fam == 1 || fam == 2) ? 1e-7 : 1e-10;
            CHECK(hi.value >= lo.value - slack);
            CHECK(lo.value >= nominal - slack);
            CHECK(lo.value <= best + slack);
        }
    }
}

TEST_CASE("values shift covariantly with the value vector") {
    RNG rng(19);
    for (int trial = 0; trial < 40; trial++) {
        const size_t n = 2 + rng.index(3);
        const numvec pbar = random_distribution(rng, n);
        const numvec v = random_values(rng, n);
        const prec_t c = rng.uniform(-2.0, 2.0);
        const prec_t beta = rng.uniform(0.0, 0.5);
        numvec shifted = v;
        for (prec_t& x : shifted) x += c;
        CAPTURE(trial);

        CHECK(duals::worst_case_tv(shifted, pbar, beta).value ==
              doctest::Approx(duals::worst_case_tv(v, pbar, beta).value - c)
                  .epsilon(1e-10));
        CHECK(duals::worst_case_chi2(shifted, pbar, beta).value ==
              doctest::Approx(duals::worst_case_chi2(v, pbar, beta).value - c)
                  .epsilon(1e-6));
        CHECK(duals::worst_case_kl(shifted, pbar, beta).value ==
              doctest::Approx(duals::worst_case_kl(v, pbar, beta).value - c)
                  .epsilon(1e-5));
    }
}

TEST_CASE("rectangular support values aggregate the per-action duals") {
    RMGInstance inst;
    inst.num_players = 2;
    inst.num_states = 3;
    inst.num_actions = {2, 2};
    inst.horizon = 2;
    RNG rng(23);
    inst.rewards.assign(2, std::vector<std::vector<numvec>>(
                               2, std::vector<numvec>(3, numvec(4, 0.0))));
    inst.transitions.assign(1, std::vector<std::vector<numvec>>(3));
    for (int s = 0; s < 3; s++)
        for (int k = 0; k < 4; k++)
            inst.transitions[0][s].push_back(random_distribution(rng, 3));

    TransitionUncertainty t;
    t.rect = TransitionUncertainty::Rect::sa;
    t.family = TransitionUncertainty::Family::tv;
    t.radius = {0.1, 0.2, 0.3, 0.05};
    inst.transition_sets[{0, 1}] = t;

    const numvec vnext = random_values(rng, 3);
    numvec mu = random_distribution(rng, 4);

    prec_t expect = 0.0;
    for (size_t k = 0; k < 4; k++)
        expect += mu[k] * duals::worst_case(t, k, vnext, inst.transitions[0][1][k]).value;
    CHECK(duals::sa_rect_support(inst, 0, 1, vnext, mu) ==
          doctest::Approx(expect).epsilon(1e-13));
    CHECK(duals::transition_support(inst, 0, 1, vnext, mu) ==
          doctest::Approx(expect).epsilon(1e-13));

    // Without a descriptor the support is the nominal expectation.
    prec_t nominal = 0.0;
    for (size_t k = 0; k < 4; k++) nominal -= mu[k] * dot(inst.transitions[0][2][k], vnext);
    CHECK(duals::transition_support(inst, 0, 2, vnext, mu) ==
          doctest::Approx(nominal).epsilon(1e-13));
}

TEST_CASE("s-rectangular ball support matches its closed form") {
    RMGInstance inst;
    inst.num_players = 2;
    inst.num_states = 2;
    inst.num_actions = {2, 2};
    inst.horizon = 2;
    RNG rng(29);
    inst.rewards.assign(2, std::vector<std::vector<numvec>>(
                               2, std::vector<numvec>(2, numvec(4, 0.0))));
    inst.transitions.assign(1, std::vector<std::vector<numvec>>(2));
    for (int s = 0; s < 2; s++)
        for (int k = 0; k < 4; k++)
            inst.transitions[0][s].push_back(random_distribution(rng, 2));

    TransitionUncertainty t;
    t.rect = TransitionUncertainty::Rect::s;
    t.family = TransitionUncertainty::Family::lp_ball;
    t.radius = {0.15};
    t.p = 2.0;
    inst.transition_sets[{0, 0}] = t;

    const numvec vnext = random_values(rng, 2);
    const numvec mu = random_distribution(rng, 4);
    prec_t nominal = 0.0;
    for (size_t k = 0; k < 4; k++) nominal -= mu[k] * dot(inst.transitions[0][0][k], vnext);
    const prec_t expect = nominal + 0.15 * lp_norm(vnext, 2.0) * lp_norm(mu, 2.0);
    CHECK(duals::s_rect_ball_support(inst, 0, 0, t, vnext, mu) ==
          doctest::Approx(expect).epsilon(1e-13));
    CHECK(duals::transition_support(inst, 0, 0, vnext, mu) ==
          doctest::Approx(expect).epsilon(1e-13));
}

} // TEST_SUITE("transition_duals")

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/reductions.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmg::reduce {

namespace {

prec_t max_entry(const Matrix& m) {
    return *std::max_element(m.data.begin(), m.data.end());
}

void check_shapes(const Matrix& A, const Matrix& B) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::invalid_argument("bimatrix payoff shapes disagree");
    if (A.rows == 0 || A.cols == 0)
        throw std::invalid_argument("bimatrix payoffs must be nonempty");
}

} // namespace

Reduction gensum_to_tpzs_reward(const Matrix& A, const Matrix& B) {
    check_shapes(A, B);
    const size_t njoint = A.data.size();

    Reduction red;
    red.shift[0] = max_entry(A);
    red.shift[1] = max_entry(B);

    // Nonpositive shifted payoffs A0, B0; the zero-sum nominal carries the
    // difference and a shared symmetric interval carries the sum. Under any
    // product profile the expected perturbation is nonpositive rank-one mass,
    // so the worst case sits at the lower bound and
    //   E[nominal] + E[lower] = E[A0]  (player 1),   = E[B0]  (player 2).
    numvec nominal(njoint), lower(njoint), upper(njoint);
    for (size_t k = 0; k < njoint; k++) {
        const prec_t a0 = A.data[k] - red.shift[0];
        const prec_t b0 = B.data[k] - red.shift[1];
        nominal[k] = 0.5 * (a0 - b0);
        lower[k] = 0.5 * (a0 + b0);
        upper[k] = -lower[k];
    }

    RMGInstance& g = red.instance;
    g.num_players = 2;
    g.num_states = 1;
    g.num_actions = {static_cast<int>(A.rows), static_cast<int>(A.cols)};
    g.horizon = 1;
    g.initial_state = 0;
    g.zero_sum = true;
    numvec negated(nominal);
    for (auto& r : negated) r = -r;
    g.rewards = {{{nominal}}, {{negated}}};

    RewardUncertainty u;
    u.family = RewardUncertainty::Family::interval;
    u.lower = lower;
    u.upper = upper;
    g.reward_sets[{0, 0, 0}] = u;
    g.reward_sets[{1, 0, 0}] = u;

    validate_instance(g);
    return red;
}

Reduction gensum_to_tpzs_transition(const Matrix& A, const Matrix& B) {
    check_shapes(A, B);
    const size_t njoint = A.data.size();

    Reduction red;
    red.shift[0] = max_entry(A);
    red.shift[1] = max_entry(B);

    numvec diff(njoint), lower(njoint), upper(njoint);
    for (size_t k = 0; k < njoint; k++) {
        const prec_t a0 = A.data[k] - red.shift[0];
        const prec_t b0 = B.data[k] - red.shift[1];
        diff[k] = 0.5 * (a0 - b0);
        lower[k] = 0.5 * (a0 + b0);  // <= 0 entrywise
        upper[k] = -lower[k];
    }

    // Step 0 pays the zero-sum difference; step 1 pays the sum term at state
    // 0 and its negation at state 1. The step-0 kernel can be chosen
    // adversarially anywhere in the simplex, so each player's adversary sends
    // it to the state where that player's continuation is lower; under a
    // lifted profile that is E[lower] <= 0 for both players, recovering
    //   E[diff] + E[lower] = E[A0]  and  E[-diff] + E[lower] = E[B0].
    RMGInstance& g = red.instance;
    g.num_players = 2;
    g.num_states = 2;
    g.num_actions = {static_cast<int>(A.rows), static_cast<int>(A.cols)};
    g.horizon = 2;
    g.initial_state = 0;
    g.zero_sum = true;

    numvec zeros(njoint, 0.0);
    numvec neg_diff(diff);
    for (auto& r : neg_diff) r = -r;
    g.rewards.assign(2, {});
    g.rewards[0] = {{diff, zeros}, {lower, upper}};
    g.rewards[1] = {{neg_diff, zeros}, {upper, lower}};

    g.transitions.assign(1, {});
    g.transitions[0].assign(2, std::vector<numvec>(njoint, numvec{0.5, 0.5}));

    TransitionUncertainty t;
    t.rect = TransitionUncertainty::Rect::sa;
    t.family = TransitionUncertainty::Family::tv;
    t.radius = {1.0};
    g.transition_sets[{0, 0}] = t;
    g.transition_sets[{0, 1}] = t;

    validate_instance(g);
    return red;
}

Policy lift_profile(const RMGInstance& inst, const numvec& x, const numvec& y) {
    if (inst.num_players != 2)
        throw std::invalid_argument("profile lifting requires a two-player instance");
    if (static_cast<int>(x.size()) != inst.num_actions[0] ||
        static_cast<int>(y.size()) != inst.num_actions[1])
        throw std::invalid_argument("profile sizes do not match the instance's action counts");
    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);
    Policy pol(2);
    pol[0].assign(H, std::vector<numvec>(S, x));
    pol[1].assign(H, std::vector<numvec>(S, y));
    validate_policy(inst, pol);
    return pol;
}

numvec bimatrix_gap(const Matrix& A, const Matrix& B, const numvec& x, const numvec& y) {
    check_shapes(A, B);
    const numvec ay = A.mul(y);
    const numvec btx = B.tmul(x);
    const prec_t u = dot(x, ay);
    const prec_t w = dot(btx, y);
    return {*std::max_element(ay.begin(), ay.end()) - u,
            *std::max_element(btx.begin(), btx.end()) - w};
}

} // namespace rmg::reduce

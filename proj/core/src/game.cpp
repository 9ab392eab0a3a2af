// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/game.hpp"

#include <sstream>
#include <stdexcept>

namespace rmg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_distribution(const numvec& v, const std::string& what) {
    if (!is_distribution(v, DIST_TOL)) {
        prec_t s = 0.0;
        for (prec_t x : v) s += x;
        std::ostringstream os;
        os << what << " is not a probability distribution (sum " << s
           << ", tolerance " << DIST_TOL << "); entries are not renormalized silently";
        fail(os.str());
    }
}

void check_norm_exponent(prec_t p, const std::string& what) {
    if (std::isnan(p) || p < 1.0) fail(what + ": norm exponent must satisfy p >= 1");
}

} // namespace

Policy uniform_policy(const RMGInstance& inst) {
    Policy pol(inst.num_players);
    for (int i = 0; i < inst.num_players; i++) {
        pol[i].assign(inst.horizon,
                      std::vector<numvec>(inst.num_states,
                                          numvec(inst.num_actions[i],
                                                 1.0 / inst.num_actions[i])));
    }
    return pol;
}

Policy random_policy(const RMGInstance& inst, uint64_t seed) {
    Policy pol(inst.num_players);
    RNG rng(seed);
    for (int i = 0; i < inst.num_players; i++) {
        pol[i].resize(inst.horizon);
        for (int h = 0; h < inst.horizon; h++) {
            pol[i][h].resize(inst.num_states);
            for (int s = 0; s < inst.num_states; s++)
                pol[i][h][s] = random_distribution(rng, inst.num_actions[i]);
        }
    }
    return pol;
}

void validate_instance(const RMGInstance& inst) {
    if (inst.num_players < 2) fail("instance must have at least 2 players");
    if (inst.num_states < 1) fail("instance must have at least 1 state");
    if (inst.horizon < 1) fail("instance horizon must be >= 1");
    if (static_cast<int>(inst.num_actions.size()) != inst.num_players)
        fail("num_actions must have one entry per player");
    for (int a : inst.num_actions)
        if (a < 1) fail("every player needs at least one action");
    if (inst.initial_state < 0 || inst.initial_state >= inst.num_states)
        fail("initial_state out of range");

    const size_t njoint = inst.num_joint_actions();

    if (static_cast<int>(inst.rewards.size()) != inst.num_players)
        fail("rewards must be indexed [player][step][state]");
    for (int i = 0; i < inst.num_players; i++) {
        if (static_cast<int>(inst.rewards[i].size()) != inst.horizon)
            fail("rewards of player " + std::to_string(i) + " must cover all steps");
        for (int h = 0; h < inst.horizon; h++) {
            if (static_cast<int>(inst.rewards[i][h].size()) != inst.num_states)
                fail("rewards must cover all states");
            for (int s = 0; s < inst.num_states; s++)
                if (inst.rewards[i][h][s].size() != njoint)
                    fail("reward vector at (player " + std::to_string(i) + ", step " +
                         std::to_string(h) + ", state " + std::to_string(s) +
                         ") must have one entry per joint action");
        }
    }

    if (inst.zero_sum) {
        if (inst.num_players != 2) fail("zero_sum requires exactly 2 players");
        for (int h = 0; h < inst.horizon; h++)
            for (int s = 0; s < inst.num_states; s++)
                for (size_t k = 0; k < njoint; k++)
                    if (std::abs(inst.rewards[0][h][s][k] + inst.rewards[1][h][s][k]) > 1e-9)
                        fail("zero_sum flag set but nominal rewards do not sum to zero at step " +
                             std::to_string(h) + ", state " + std::to_string(s));
    }

    if (inst.horizon > 1) {
        if (static_cast<int>(inst.transitions.size()) != inst.horizon - 1)
            fail("transitions must be defined for steps 0..H-2");
        for (int h = 0; h + 1 < inst.horizon; h++) {
            if (static_cast<int>(inst.transitions[h].size()) != inst.num_states)
                fail("transitions must cover all states");
            for (int s = 0; s < inst.num_states; s++) {
                if (inst.transitions[h][s].size() != njoint)
                    fail("transitions must cover all joint actions");
                for (size_t k = 0; k < njoint; k++) {
                    const numvec& d = inst.transitions[h][s][k];
                    if (static_cast<int>(d.size()) != inst.num_states)
                        fail("transition distribution has wrong dimension");
                    check_distribution(d, "transition at (step " + std::to_string(h) +
                                              ", state " + std::to_string(s) + ", joint action " +
                                              std::to_string(k) + ")");
                }
            }
        }
    } else if (!inst.transitions.empty()) {
        fail("horizon-1 instances must not define transitions");
    }

    for (const auto& [key, u] : inst.reward_sets) {
        auto [i, h, s] = key;
        if (i < 0 || i >= inst.num_players || h < 0 || h >= inst.horizon || s < 0 ||
            s >= inst.num_states)
            fail("reward uncertainty key out of range");
        switch (u.family) {
        case RewardUncertainty::Family::singleton:
            break;
        case RewardUncertainty::Family::interval:
            if (u.lower.size() != njoint || u.upper.size() != njoint)
                fail("interval reward set must bound every joint action");
            for (size_t k = 0; k < njoint; k++)
                if (u.lower[k] > u.upper[k] + 1e-15)
                    fail("interval reward set has lower > upper");
            break;
        case RewardUncertainty::Family::opnorm:
            if (u.alpha < 0) fail("opnorm reward set needs alpha >= 0");
            check_norm_exponent(u.p, "opnorm reward set");
            check_norm_exponent(u.q, "opnorm reward set");
            break;
        case RewardUncertainty::Family::kernel:
            if (u.tau < 0) fail("kernel reward set needs tau >= 0");
            if (u.kernel == KernelKind::kl_reference) {
                if (static_cast<int>(u.reference.size()) != inst.num_actions[i])
                    fail("kl_reference kernel needs a reference over own actions");
                for (prec_t r : u.reference)
                    if (r <= 0) fail("kl_reference kernel needs a strictly positive reference");
                check_distribution(u.reference, "kl_reference kernel reference");
            }
            if (u.kernel == KernelKind::renyi && (u.order <= 0 || u.order == 1.0))
                fail("renyi kernel needs order > 0, order != 1");
            break;
        }
        if (u.aligned_offset) {
            if (inst.num_players != 2)
                fail("aligned_offset reward sets are only defined for 2-player instances");
            const RewardUncertainty* opp = inst.reward_set(1 - i, h, s);
            if (opp != nullptr && opp->family == RewardUncertainty::Family::opnorm &&
                opp->q != 1.0)
                fail("aligned_offset requires the opponent's opnorm set to have q = 1");
            if (opp != nullptr && opp->family == RewardUncertainty::Family::interval)
                fail("aligned_offset is not defined against interval sets");
        }
    }

    for (const auto& [key, u] : inst.transition_sets) {
        auto [h, s] = key;
        if (h < 0 || h >= inst.horizon - 1 || s < 0 || s >= inst.num_states)
            fail("transition uncertainty key out of range (sets apply to steps 0..H-2)");
        for (prec_t b : u.radius)
            if (b < 0 || !std::isfinite(b)) fail("transition set radius must be finite and >= 0");
        if (u.rect == TransitionUncertainty::Rect::sa) {
            if (u.family == TransitionUncertainty::Family::lp_ball)
                fail("lp_ball transition sets are s-rectangular");
            if (u.radius.size() != 1 && u.radius.size() != njoint)
                fail("(s,a)-rectangular transition set needs 1 or per-joint-action radii");
            if (u.family == TransitionUncertainty::Family::wasserstein) {
                const size_t S = static_cast<size_t>(inst.num_states);
                if (u.metric.size() != S * S)
                    fail("wasserstein transition set needs a num_states^2 ground metric");
                for (size_t a = 0; a < S; a++) {
                    if (std::abs(u.metric[a * S + a]) > 1e-15)
                        fail("wasserstein ground metric must have zero diagonal");
                    for (size_t b = 0; b < S; b++) {
                        if (u.metric[a * S + b] < 0) fail("wasserstein ground metric must be >= 0");
                        if (std::abs(u.metric[a * S + b] - u.metric[b * S + a]) > 1e-12)
                            fail("wasserstein ground metric must be symmetric");
                    }
                }
            }
        } else {
            if (u.family != TransitionUncertainty::Family::lp_ball)
                fail("s-rectangular transition sets must be lp_ball");
            if (u.radius.size() != 1) fail("s-rectangular ball needs a single radius");
            check_norm_exponent(u.p, "s-rectangular transition ball");
        }
    }
}

void validate_policy(const RMGInstance& inst, const Policy& policy) {
    if (static_cast<int>(policy.size()) != inst.num_players)
        fail("policy must have one block per player");
    for (int i = 0; i < inst.num_players; i++) {
        if (static_cast<int>(policy[i].size()) != inst.horizon)
            fail("policy of player " + std::to_string(i) + " must cover all steps");
        for (int h = 0; h < inst.horizon; h++) {
            if (static_cast<int>(policy[i][h].size()) != inst.num_states)
                fail("policy must cover all states");
            for (int s = 0; s < inst.num_states; s++) {
                const numvec& d = policy[i][h][s];
                if (static_cast<int>(d.size()) != inst.num_actions[i])
                    fail("policy distribution has wrong dimension");
                check_distribution(d, "policy of player " + std::to_string(i) + " at (step " +
                                          std::to_string(h) + ", state " + std::to_string(s) +
                                          ")");
            }
        }
    }
}

numvec joint_distribution(const RMGInstance& inst, const Policy& policy, int h, int s) {
    const size_t njoint = inst.num_joint_actions();
    numvec out(njoint, 1.0);
    for (size_t k = 0; k < njoint; k++) {
        const std::vector<int> profile = inst.joint_profile(k);
        for (int i = 0; i < inst.num_players; i++) out[k] *= policy[i][h][s][profile[i]];
    }
    return out;
}

numvec joint_distribution_excluding(const RMGInstance& inst, const Policy& policy, int h, int s,
                                    int player) {
    const size_t n = inst.num_joint_actions_excluding(player);
    numvec out(n, 1.0);
    for (size_t k = 0; k < n; k++) {
        size_t rest = k;
        for (int i = inst.num_players - 1; i >= 0; i--) {
            if (i == player) continue;
            const size_t ai = rest % static_cast<size_t>(inst.num_actions[i]);
            rest /= static_cast<size_t>(inst.num_actions[i]);
            out[k] *= policy[i][h][s][ai];
        }
    }
    return out;
}

std::pair<int, size_t> split_joint_index(const RMGInstance& inst, int player, size_t joint) {
    int own = 0;
    size_t others = 0;
    const std::vector<int> profile = inst.joint_profile(joint);
    for (int i = 0; i < inst.num_players; i++) {
        if (i == player) {
            own = profile[i];
        } else {
            others = others * static_cast<size_t>(inst.num_actions[i]) +
                     static_cast<size_t>(profile[i]);
        }
    }
    return {own, others};
}

size_t merge_joint_index(const RMGInstance& inst, int player, int own_action, size_t others) {
    std::vector<int> profile(inst.num_players);
    for (int i = inst.num_players - 1; i >= 0; i--) {
        if (i == player) continue;
        profile[i] = static_cast<int>(others % static_cast<size_t>(inst.num_actions[i]));
        others /= static_cast<size_t>(inst.num_actions[i]);
    }
    profile[player] = own_action;
    return inst.joint_index(profile);
}

} // namespace rmg

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <utility>

#include "rmg/types.hpp"

namespace rmg {

// ---------------------------------------------------------------------------
// Uncertainty descriptors.
//
// Reward uncertainty describes a set of additive perturbations around the
// nominal reward tensor of one player at one (state, step). Transition
// uncertainty describes a set of kernels around the nominal transition at one
// (state, step); for (s,a)-rectangular families the set is a product of
// per-action divergence balls in the probability simplex, for s-rectangular
// balls it is a norm ball on the whole kernel.
// ---------------------------------------------------------------------------

/// Kernel type for entropy-style reward regularization families.
enum class KernelKind { shannon, kl_reference, tsallis, renyi };

/// Reward uncertainty set (additive perturbations around the nominal).
struct RewardUncertainty {
    enum class Family { singleton, interval, opnorm, kernel };
    Family family = Family::singleton;

    // interval: entrywise perturbation bounds over joint actions (row-major),
    // lower[k] <= 0 <= upper[k] is not required, only lower[k] <= upper[k].
    numvec lower, upper;

    // opnorm: { R : ||R||_{q -> p*} <= alpha }, whose support at -mu_i mu_-i^T
    // is alpha * ||mu_i||_p * ||mu_-i||_q.
    prec_t alpha = 0.0;
    prec_t p = 2.0;
    prec_t q = 2.0;

    // kernel: support value tau * sum_a mu_i(a) * w(mu_i(a)) for the kernel's
    // generating function w (entropy-style regularization; the nominal reward
    // itself is not a member of these sets).
    KernelKind kernel = KernelKind::shannon;
    prec_t tau = 0.0;
    numvec reference;    // kl_reference: strictly positive reference distribution
    prec_t order = 2.0;  // renyi

    // When set, the support function additionally subtracts the opponent's own
    // regularizer evaluated at the opponent marginal. Instances produced by
    // the decomposable generator carry this flag so the per-player robust
    // values of a zero-sum instance sum to exactly zero.
    bool aligned_offset = false;
};

/// Transition uncertainty set around the nominal kernel at one (state, step).
struct TransitionUncertainty {
    enum class Rect { sa, s };
    enum class Family { tv, kl, chi2, wasserstein, lp_ball };

    Rect rect = Rect::sa;
    Family family = Family::tv;

    /// Radius; one entry per joint action for (s,a)-rectangular sets, or a
    /// single entry for s-rectangular balls.
    numvec radius;

    /// Ground metric (num_states x num_states, row-major); wasserstein only.
    numvec metric;

    /// Norm exponent for s-rectangular lp balls.
    prec_t p = 2.0;

    prec_t radius_for(size_t joint_action) const {
        return radius.size() == 1 ? radius[0] : radius.at(joint_action);
    }
};

// ---------------------------------------------------------------------------
// Instance and policies.
// ---------------------------------------------------------------------------

/// A finite-horizon robust Markov game.
///
/// Joint actions are indexed row-major over (a_1, ..., a_N): player 1 is the
/// slowest-varying coordinate. Rewards are defined for steps 0..H-1 and
/// transitions for steps 0..H-2. Uncertainty descriptors are sparse; a missing
/// entry means the singleton {nominal}.
struct RMGInstance {
    int num_players = 2;
    int num_states = 1;
    std::vector<int> num_actions;  // one entry per player
    int horizon = 1;
    int initial_state = 0;
    bool zero_sum = false;

    /// rewards[i][h][s] -> value per joint action (row-major).
    std::vector<std::vector<std::vector<numvec>>> rewards;
    /// transitions[h][s][joint] -> distribution over next states.
    std::vector<std::vector<std::vector<numvec>>> transitions;

    /// Keyed by (player, step, state).
    std::map<std::tuple<int, int, int>, RewardUncertainty> reward_sets;
    /// Keyed by (step, state).
    std::map<std::pair<int, int>, TransitionUncertainty> transition_sets;

    // -- joint action indexing ------------------------------------------------

    size_t num_joint_actions() const {
        size_t n = 1;
        for (int a : num_actions) n *= static_cast<size_t>(a);
        return n;
    }

    /// Number of joint actions of all players except `player`.
    size_t num_joint_actions_excluding(int player) const {
        size_t n = 1;
        for (int i = 0; i < num_players; i++)
            if (i != player) n *= static_cast<size_t>(num_actions[i]);
        return n;
    }

    /// Row-major index of a joint action profile.
    size_t joint_index(const std::vector<int>& profile) const {
        assert(static_cast<int>(profile.size()) == num_players);
        size_t idx = 0;
        for (int i = 0; i < num_players; i++) {
            assert(profile[i] >= 0 && profile[i] < num_actions[i]);
            idx = idx * static_cast<size_t>(num_actions[i]) + static_cast<size_t>(profile[i]);
        }
        return idx;
    }

    /// Inverse of joint_index.
    std::vector<int> joint_profile(size_t idx) const {
        std::vector<int> profile(num_players);
        for (int i = num_players - 1; i >= 0; i--) {
            profile[i] = static_cast<int>(idx % static_cast<size_t>(num_actions[i]));
            idx /= static_cast<size_t>(num_actions[i]);
        }
        return profile;
    }

    const RewardUncertainty* reward_set(int player, int step, int state) const {
        auto it = reward_sets.find({player, step, state});
        return it == reward_sets.end() ? nullptr : &it->second;
    }

    const TransitionUncertainty* transition_set(int step, int state) const {
        auto it = transition_sets.find({step, state});
        return it == transition_sets.end() ? nullptr : &it->second;
    }

    bool has_transition_uncertainty() const { return !transition_sets.empty(); }
};

/// Markov product policy: policy[i][h][s] is player i's distribution over its
/// own actions at (step h, state s).
using Policy = std::vector<std::vector<std::vector<numvec>>>;

/// Uniform product policy for an instance.
Policy uniform_policy(const RMGInstance& inst);

/// Random product policy (flat Dirichlet at every (i,h,s)), deterministic in
/// the seed.
Policy random_policy(const RMGInstance& inst, uint64_t seed);

/// Validate instance shapes, distributions (within DIST_TOL; no silent
/// renormalization) and uncertainty descriptors. Throws std::invalid_argument
/// with a precise message on the first violation.
void validate_instance(const RMGInstance& inst);

/// Validate a policy against an instance (shape and distribution checks).
void validate_policy(const RMGInstance& inst, const Policy& policy);

/// Joint distribution over all players' actions at (h, s) under a product
/// policy (row-major over profiles).
numvec joint_distribution(const RMGInstance& inst, const Policy& policy, int h, int s);

/// Joint distribution over the actions of all players except `player`,
/// row-major over the remaining profile coordinates in player order.
numvec joint_distribution_excluding(const RMGInstance& inst, const Policy& policy, int h, int s,
                                    int player);

/// Map a joint index over all players to (own action, index over the others'
/// joint profile) for `player`.
std::pair<int, size_t> split_joint_index(const RMGInstance& inst, int player, size_t joint);

/// Compose (own action, others-profile index) back into a full joint index.
size_t merge_joint_index(const RMGInstance& inst, int player, int own_action, size_t others);

} // namespace rmg

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include <string>

#include "rmg/game.hpp"
#include "rmg/types.hpp"

namespace rmg::gen {

/// Configuration for the random instance generator. Families are selected by
/// name so the generator can be driven directly from command-line flags.
struct InstanceConfig {
    int num_players = 2;
    int num_states = 2;
    std::vector<int> num_actions = {2, 2};
    int horizon = 2;
    int initial_state = 0;
    bool zero_sum = false;
    prec_t reward_scale = 1.0;

    /// Reward uncertainty attached to every (player, step, state):
    /// "none", "singleton", "interval", "opnorm" or "kernel".
    std::string reward_family = "none";
    prec_t interval_width = 0.2;
    prec_t alpha = 0.1;
    prec_t opnorm_p = 2.0;
    prec_t opnorm_q = 2.0;
    KernelKind kernel = KernelKind::shannon;
    prec_t tau = 0.1;
    prec_t renyi_order = 2.0;
    /// Pair the two players' regularizers so each player's support value is
    /// its own term minus the opponent's; keeps two-player zero-sum stage
    /// games exactly zero-sum. Requires an opnorm (q = 1) or kernel family.
    bool aligned_offset = false;

    /// Transition uncertainty attached to every (step, state):
    /// "none", "tv", "kl", "chi2", "wasserstein" or "lp_ball".
    std::string transition_family = "none";
    TransitionUncertainty::Rect rectangularity = TransitionUncertainty::Rect::sa;
    prec_t radius = 0.1;
    prec_t lp_p = 2.0;
};

/// Draws a full instance (nominal model plus uncertainty descriptors) from
/// the given configuration. The result always passes validate_instance.
RMGInstance random_instance(RNG& rng, const InstanceConfig& cfg);

/// Random matrix with entries uniform in [lo, hi].
Matrix random_matrix(RNG& rng, size_t rows, size_t cols, prec_t lo = -1.0, prec_t hi = 1.0);

/// Classic one-shot games as single-state, horizon-1 instances.
RMGInstance matching_pennies();
RMGInstance prisoners_dilemma();
RMGInstance battle_of_sexes();

/// Dispatch by name ("matching_pennies", "prisoners_dilemma",
/// "battle_of_sexes"); throws std::invalid_argument for unknown names.
RMGInstance named_instance(const std::string& name);

/// Wraps a bimatrix game (A for player 1, B for player 2) as a single-state,
/// horizon-1 instance.
RMGInstance bimatrix_instance(const Matrix& A, const Matrix& B);

} // namespace rmg::gen

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include "rmg/game.hpp"
#include "rmg/types.hpp"

namespace rmg::reduce {

/// A general-sum bimatrix game embedded in a robust zero-sum instance.
/// Per-player payoffs are recovered as (robust value of player i) + shift[i].
struct Reduction {
    RMGInstance instance;
    prec_t shift[2] = {0.0, 0.0};
};

/// Embed a bimatrix game (A, B) into a single-state, one-step robust zero-sum
/// instance with symmetric interval reward uncertainty. Under any product
/// profile, each player's robust payoff equals its bimatrix payoff shifted by
/// a constant, so equilibria, and per-player improvement gaps, carry over
/// exactly.
Reduction gensum_to_tpzs_reward(const Matrix& A, const Matrix& B);

/// Embed a bimatrix game (A, B) into a two-state, two-step robust zero-sum
/// instance whose uncertainty sits entirely in the transition kernel (the
/// first-step kernel may be chosen adversarially from the whole simplex).
/// For profiles lifted with lift_profile, the robust value of each player at
/// the initial state equals its bimatrix payoff shifted by a constant.
Reduction gensum_to_tpzs_transition(const Matrix& A, const Matrix& B);

/// Play the one-shot profile (x, y) at every step and state of a lifted
/// instance.
Policy lift_profile(const RMGInstance& inst, const numvec& x, const numvec& y);

/// Per-player unilateral improvement gaps of (x, y) in the bimatrix game
/// (A, B): entry i is how much player i gains by switching to a best
/// response. (x, y) is a Nash equilibrium iff both entries are <= 0 + tol.
numvec bimatrix_gap(const Matrix& A, const Matrix& B, const numvec& x, const numvec& y);

} // namespace rmg::reduce

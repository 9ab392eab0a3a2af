// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include "rmg/game.hpp"
#include "rmg/stage_solvers.hpp"
#include "rmg/types.hpp"

namespace rmg::plan {

// ---------------------------------------------------------------------------
// Policy evaluation.
// ---------------------------------------------------------------------------

/// Robust stage value of player `player` at (step, state) under the joint
/// distribution induced by `policy`, with continuation values `vnext` (player
/// `player`'s values at step+1; pass an empty vector at the last step):
///   E_mu[nominal reward] - sigma_reward(mu) - sigma_transition(mu, vnext).
prec_t robust_stage_q(const RMGInstance& inst, int player, int step, int state,
                      const Policy& policy, const numvec& vnext);

struct EvalResult {
    /// values[i][h][s]: robust value-to-go of player i at (h, s).
    std::vector<std::vector<numvec>> values;
    /// Per-player robust value at (step 0, initial state).
    numvec initial;
};

/// Robust value of a fixed product policy for every player, by backward
/// induction over the per-player adversarial models.
EvalResult robust_policy_eval(const RMGInstance& inst, const Policy& policy);

/// Expected value of a fixed product policy under the nominal model alone
/// (uncertainty descriptors ignored).
EvalResult nominal_policy_eval(const RMGInstance& inst, const Policy& policy);

// ---------------------------------------------------------------------------
// Best response and equilibrium gap.
// ---------------------------------------------------------------------------

struct BestResponseResult {
    /// br[h][s]: the replying player's action distribution.
    std::vector<std::vector<numvec>> br;
    /// values[h][s]: the replying player's robust value-to-go under the reply.
    std::vector<numvec> values;
    /// Robust value at (step 0, initial state).
    prec_t initial = 0.0;
};

/// Robust best response of `player` against the other players' fixed policy:
/// backward induction where each stage problem is a regularized best response
/// (closed form whenever at most one nonlinear penalty is active, composite
/// mirror ascent otherwise).
BestResponseResult robust_best_response(const RMGInstance& inst, int player,
                                        const Policy& policy);

struct GapResult {
    /// Per-player improvement from deviating to a robust best response.
    numvec per_player;
    /// max_i per_player[i]; the policy is an eps-robust equilibrium iff
    /// max_gap <= eps.
    prec_t max_gap = 0.0;
};

/// Robust equilibrium gap of a product policy, measured independently of how
/// the policy was produced.
GapResult rne_gap(const RMGInstance& inst, const Policy& policy);

// ---------------------------------------------------------------------------
// Planners.
// ---------------------------------------------------------------------------

struct PlanResult {
    Policy policy;
    /// Per-player robust value at (step 0, initial state).
    numvec initial;
    /// Planner value table (player 1 for the zero-sum planner): values[h][s].
    std::vector<numvec> values;
    GapResult gap;
    /// True when gap.max_gap <= the requested eps.
    bool certified = false;
};

/// Two-player zero-sum planner: backward induction with one regularized
/// matrix saddle point per (step, state), solved to eps / (2 * horizon), then
/// certified by an independent gap computation.
///
/// Requires a decomposable instance: two players, zero-sum nominal rewards,
/// reward uncertainty whose support value separates per player (singleton,
/// non-renyi kernel, or opnorm with q = 1, with aligned offsets so the stage
/// games stay zero-sum), and (s,a)-rectangular transition uncertainty only.
/// Anything else throws std::invalid_argument directing the caller to the
/// general-sum solver.
PlanResult solve_tpzs_rmg(const RMGInstance& inst, prec_t eps,
                          size_t stage_iteration_cap = 1000000);

/// Small general-sum planner: two players, at most 4 actions each, reward
/// uncertainty only (singleton or interval, which fold into the nominal
/// payoffs exactly). Solves each stage by support enumeration and certifies
/// the result via rne_gap. Throws std::invalid_argument on unsupported
/// structure and std::runtime_error if a stage has no enumerable equilibrium.
PlanResult solve_small_general_sum_rmg(const RMGInstance& inst, prec_t eps);

// ---------------------------------------------------------------------------
// Consistency checking.
// ---------------------------------------------------------------------------

struct EquivalenceResult {
    EvalResult support_path;      // values via support functions
    EvalResult realization_path;  // values via realized worst-case models
    /// max over (player, step, state) of the absolute difference.
    prec_t max_diff = 0.0;
};

/// Evaluates a policy two ways: through support-function formulas and through
/// explicitly realized worst-case models (reward perturbations and transition
/// kernels), and reports the largest discrepancy. Descriptors without a
/// realization (renyi kernels, aligned offsets) are rejected.
EquivalenceResult equivalence_check(const RMGInstance& inst, const Policy& policy);

/// True when the instance uses a transition family whose dual is solved
/// iteratively (kl, chi2) rather than in closed form; callers typically allow
/// a looser tolerance in that case.
bool has_iterative_duals(const RMGInstance& inst);

} // namespace rmg::plan

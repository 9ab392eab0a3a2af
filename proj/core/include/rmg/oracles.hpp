// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include <functional>

#include "rmg/game.hpp"
#include "rmg/types.hpp"

namespace rmg::oracle {

struct OracleConfig {
    size_t samples = 2000;
    size_t local_steps = 200;
    size_t grid_resolution = 100;
    uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// These routines exist to cross-check the production solvers through
// independent formulations (vertex-enumerated linear programs, KKT systems
// enumerated over supports, feasibility bisection). They favor transparency
// over speed and are only suitable for small problems.
// ---------------------------------------------------------------------------

struct LPResult {
    bool feasible = false;
    prec_t value = -INF;
    numvec x;
};

/// Maximize c.x subject to Aeq x = beq, Aub x <= bub, x >= 0, by enumerating
/// vertices (all choices of active constraints). Aeq and Aub are dense
/// row-major matrices. Throws std::invalid_argument if the number of vertex
/// candidates exceeds an internal guard (~2e5).
LPResult lp_enumerate(const numvec& c, const Matrix& aeq, const numvec& beq, const Matrix& aub,
                      const numvec& bub);

/// sup { <p, -v> : p in simplex, 0.5 * ||p - pbar||_1 <= beta } via the
/// epigraph linear program over (p, t).
prec_t tv_worst_lp(const numvec& v, const numvec& pbar, prec_t beta);

/// sup { <p, -v> : p in simplex, W1(p, pbar) <= beta } via the coupling
/// linear program over transport plans.
prec_t wasserstein_worst_lp(const numvec& v, const numvec& pbar, prec_t beta, const numvec& rho);

/// sup { <p, -v> : p in simplex, sum (p-pbar)^2/pbar <= beta } by enumerating
/// supports and solving each KKT system in closed form.
prec_t chi2_worst_kkt(const numvec& v, const numvec& pbar, prec_t beta);

/// sup { <p, -v> : p in simplex, KL(p || pbar) <= beta } by bisecting the
/// temperature of the exponential tilt until the divergence meets beta.
prec_t kl_worst_tilt(const numvec& v, const numvec& pbar, prec_t beta);

/// Exact induced norm of the rank-one matrix u w^T as an operator from
/// l_from to l_to: ||w||_{from*} * ||u||_to.
prec_t rank1_induced_norm(const numvec& u, const numvec& w, prec_t from, prec_t to);

/// Induced operator norm ||R||_{from -> to}. Exact for from == 1 (column
/// norms) and from == inf with at most 16 columns (sign-vector vertices);
/// otherwise a sampled lower bound using `trials` random directions.
prec_t induced_norm(const Matrix& R, prec_t from, prec_t to, RNG& rng, size_t trials = 1000);

/// A random member of the divergence ball around pbar described by `u` at
/// `joint_action` (feasible by construction, for dominance tests).
numvec sample_ball_member(const TransitionUncertainty& u, size_t joint_action,
                          const numvec& pbar, RNG& rng);

/// A random member of an opnorm reward-perturbation set
/// { R : ||R||_{q -> p*} <= alpha }, returned as a (rows x cols) matrix.
Matrix sample_opnorm_member(size_t rows, size_t cols, prec_t alpha, prec_t p, prec_t q,
                            RNG& rng);

struct SupportWitness {
    prec_t value = -INF;
    numvec member;
};

/// Sampled lower bound on the support function of a reward-perturbation set
/// in direction `y`: the best <member, y> over random feasible members plus
/// local improvement. Never exceeds the true support value (members are
/// feasible by construction). `y` and the witness use the descriptor's
/// joint-action storage layout; `joint_map` translates own-major pair indices
/// to that layout exactly as in support::support_value (nullptr when the own
/// action is the slowest coordinate). Throws for renyi kernels, which have no
/// feasible member construction here.
SupportWitness oracle_set_support(const RewardUncertainty& u, size_t n_own, size_t n_opp,
                                  const numvec& y, const OracleConfig& cfg,
                                  const std::vector<size_t>* joint_map = nullptr);

struct GridPoint {
    numvec x;
    prec_t value = -INF;
};

/// Exhaustive maximization of `objective` over the regular simplex grid with
/// `resolution` subdivisions per coordinate. Throws when the grid would
/// exceed an internal memory/time guard (intended for dim <= 3).
GridPoint oracle_simplex_grid_max(const std::function<prec_t(const numvec&)>& objective,
                                  size_t dim, size_t resolution);

struct MCEstimate {
    numvec value;
    numvec std_error;
};

/// Unbiased Monte-Carlo estimate of the nominal (uncertainty-free) value of
/// `policy` from the initial state, with per-player standard errors.
MCEstimate oracle_mc_eval(const RMGInstance& inst, const Policy& policy, size_t rollouts,
                          uint64_t seed);

} // namespace rmg::oracle

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include "rmg/game.hpp"

namespace rmg::duals {

/// Result of a worst-case transition problem
///   value = sup { <p, -v> : p in ball(pbar, beta) }
/// over a divergence ball inside the probability simplex. `worst` attains the
/// value (within solver tolerance) and is feasible; `lambda` reports the inner
/// dual multiplier where one exists (kl, wasserstein).
struct DualResult {
    prec_t value = 0.0;
    numvec worst;
    prec_t lambda = 0.0;
};

/// Total variation ball { p : 0.5 * ||p - pbar||_1 <= beta }. Exact greedy
/// transport, O(|S| log |S|).
DualResult worst_case_tv(const numvec& v, const numvec& pbar, prec_t beta);

/// KL ball { p : KL(p || pbar) <= beta }. One-dimensional convex dual solved
/// by golden-section search with stabilized log-sum-exp; analytic endpoints.
DualResult worst_case_kl(const numvec& v, const numvec& pbar, prec_t beta);

/// Chi-squared ball { p : sum (p - pbar)^2 / pbar <= beta }. Value from the
/// truncation form min_t { -E[min(v,t)] + sqrt(beta * Var(min(v,t))) },
/// searched per segment; the maximizer from the matching active-set solution.
DualResult worst_case_chi2(const numvec& v, const numvec& pbar, prec_t beta);

/// Wasserstein-1 ball with ground metric rho (num_states^2, row-major):
/// { p : W1(p, pbar) <= beta }. The scalar dual is convex piecewise-linear in
/// lambda and is evaluated exactly over all breakpoints.
DualResult worst_case_wasserstein(const numvec& v, const numvec& pbar, prec_t beta,
                                  const numvec& rho);

/// Dispatch on an (s,a)-rectangular descriptor for one joint action.
DualResult worst_case(const TransitionUncertainty& u, size_t joint_action, const numvec& v,
                      const numvec& pbar);

/// Support value of the (s,a)-rectangular product set at -V mu^T:
///   sum_a mu(a) * sup_{p in ball_a} <p, -V>.
prec_t sa_rect_support(const RMGInstance& inst, int step, int state, const numvec& vnext,
                       const numvec& mu_joint);

/// Support value of an s-rectangular norm ball around the nominal kernel at
/// -V mu^T: -E_mu[Pbar V] + beta * ||V||_p * ||mu||_q with q dual to p.
prec_t s_rect_ball_support(const RMGInstance& inst, int step, int state,
                           const TransitionUncertainty& u, const numvec& vnext,
                           const numvec& mu_joint);

/// Support value of whatever transition set exists at (step, state); zero
/// uncertainty means the singleton at the nominal kernel. Always equals
/// -inf_{P in set} E_mu[P V].
prec_t transition_support(const RMGInstance& inst, int step, int state, const numvec& vnext,
                          const numvec& mu_joint);

} // namespace rmg::duals

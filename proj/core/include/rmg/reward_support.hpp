// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include "rmg/game.hpp"
#include "rmg/stage_solvers.hpp"

namespace rmg::support {

/// Value of the kernel term tau * sum_a pi(a) * w(pi(a)) for the given kernel.
/// `reference` is required for kl_reference; `order` for renyi (which is the
/// whole-distribution functional tau/(order-1) * log sum_a pi(a)^order and not
/// separable across actions).
prec_t support_kernel(KernelKind kind, prec_t tau, const numvec& pi,
                      const numvec* reference = nullptr, prec_t order = 2.0);

/// Own-marginal regularizer of a descriptor: the part of the support function
/// that depends only on the player's own marginal. For opnorm this is
/// alpha * ||mu_own||_p (the full support value multiplies it by
/// ||mu_opp||_q); for kernels it is support_kernel; zero for singletons.
/// Interval sets have no own-marginal decomposition and are rejected.
prec_t own_regularizer(const RewardUncertainty& u, const numvec& mu_own);

/// Support function of the perturbation set evaluated at -mu_own mu_opp^T,
/// where mu_opp is the joint distribution of all other players. Descriptor
/// arrays (interval bounds) are stored in the instance's joint-action layout;
/// `joint_map`, when given, maps the own-major pair index
/// a_own * |mu_opp| + a_opp to that layout (see merge_joint_index). Pass
/// nullptr when the player's own action is the slowest joint coordinate
/// (player 0), where the two layouts coincide. When `u.aligned_offset` is
/// set, `opp` must point to the opponent's descriptor and the opponent's own
/// regularizer at mu_opp is subtracted.
prec_t support_value(const RewardUncertainty& u, const RewardUncertainty* opp,
                     const numvec& mu_own, const numvec& mu_opp,
                     const std::vector<size_t>* joint_map = nullptr);

/// A perturbation in the instance's joint-action layout (same as the nominal
/// reward) that attains the base support value:
/// E_mu[nominal] - E_mu[nominal + pert] equals support_value without the
/// aligned offset. `joint_map` as in support_value. Throws for renyi kernels,
/// whose support value is not realized by a per-action perturbation.
numvec worst_case_perturbation(const RewardUncertainty& u, const numvec& mu_own,
                               const numvec& mu_opp,
                               const std::vector<size_t>* joint_map = nullptr);

/// True if the descriptor's support function decomposes as
/// own-term(mu_own) * scale(mu_opp) with scale == 1 (singleton, separable
/// kernels, opnorm with q = 1); this is what the fast zero-sum planner needs.
bool separable_in_own_marginal(const RewardUncertainty& u);

/// Stage regularizer whose value at mu_own equals the descriptor's
/// own-marginal support term: singletons map to no regularization, opnorm
/// sets to the p-norm penalty with coefficient alpha * opp_scale (pass
/// ||mu_opp||_q for the exact stage objective), kernel sets to the matching
/// kernel regularizer. Intervals also map to no regularization -- their
/// support folds into the linear part of the payoff, not the regularizer.
stage::Regularizer regularizer_from_uncertainty(const RewardUncertainty& u,
                                                prec_t opp_scale = 1.0);

/// Inverse direction: the reward descriptor whose robust stage game
/// reproduces a regularized stage game. A p-norm penalty with coefficient
/// alpha becomes the opnorm ball ||R||_{1 -> p*} <= alpha (q = 1, so the
/// opponent scale is identically one); kernel regularizers map to the kernel
/// family; no regularization maps to a singleton.
RewardUncertainty uncertainty_from_regularizer(const stage::Regularizer& reg);

} // namespace rmg::support

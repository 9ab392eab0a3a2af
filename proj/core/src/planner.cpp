// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rmg/reward_support.hpp"
#include "rmg/transition_duals.hpp"

namespace rmg::plan {

namespace {

using stage::BRResult;
using stage::Regularizer;


prec_t dual_exponent(prec_t p) {
    if (std::isinf(p)) return 1.0;
    if (p <= 1.0) return INF;
    return p / (p - 1.0);
}

/// One player's robust stage objective against a fixed opponent mixture,
/// decomposed as <g, x> - Omega_reward(x) - ball_coeff * ||x||_ball_q + c.
struct StageDecomposition {
    numvec g;
    Regularizer reward_reg;
    prec_t ball_coeff = 0.0;
    prec_t ball_q = 2.0;
    prec_t constant = 0.0;
};

StageDecomposition stage_decomposition(const RMGInstance& inst, int player, int step, int state,
                                       const numvec& nu, const numvec& vnext) {
    const size_t n_own = static_cast<size_t>(inst.num_actions[player]);
    const size_t n_opp = inst.num_joint_actions_excluding(player);
    StageDecomposition dec;
    dec.g.assign(n_own, 0.0);

    const numvec& reward = inst.rewards[player][step][state];
    const RewardUncertainty* u = inst.reward_set(player, step, state);
    const bool interval = u && u->family == RewardUncertainty::Family::interval;

    for (size_t a = 0; a < n_own; a++)
        for (size_t b = 0; b < n_opp; b++) {
            const size_t k = merge_joint_index(inst, player, static_cast<int>(a), b);
            prec_t coeff = reward[k];
            if (interval) coeff += u->lower[k];  // worst additive drop at nonnegative mass
            dec.g[a] += nu[b] * coeff;
        }

    if (u) {
        dec.reward_reg = support::regularizer_from_uncertainty(
            *u, u->family == RewardUncertainty::Family::opnorm ? lp_norm(nu, u->q) : 1.0);
        if (u->aligned_offset && inst.num_players == 2) {
            const RewardUncertainty* opp = inst.reward_set(1 - player, step, state);
            if (opp) dec.constant += support::own_regularizer(*opp, nu);
        }
    }

    if (step < inst.horizon - 1 && !vnext.empty()) {
        const TransitionUncertainty* t = inst.transition_set(step, state);
        const auto& kernels = inst.transitions[step][state];
        if (t == nullptr || t->rect == TransitionUncertainty::Rect::s) {
            for (size_t a = 0; a < n_own; a++)
                for (size_t b = 0; b < n_opp; b++) {
                    const size_t k = merge_joint_index(inst, player, static_cast<int>(a), b);
                    dec.g[a] += nu[b] * dot(kernels[k], vnext);
                }
            if (t != nullptr) {
                const prec_t qd = dual_exponent(t->p);
                const prec_t coeff =
                    t->radius[0] * lp_norm(vnext, t->p) * lp_norm(nu, qd);
                if (std::abs(qd - 1.0) < 1e-12) {
                    dec.constant -= coeff;  // ||x||_1 = 1 on the simplex
                } else {
                    dec.ball_coeff = coeff;
                    dec.ball_q = qd;
                }
            }
        } else {
            for (size_t a = 0; a < n_own; a++)
                for (size_t b = 0; b < n_opp; b++) {
                    const size_t k = merge_joint_index(inst, player, static_cast<int>(a), b);
                    const auto dual = duals::worst_case(*t, k, vnext, kernels[k]);
                    dec.g[a] -= nu[b] * dual.value;
                }
        }
    }
    return dec;
}

/// Maximize <g, x> - Omega(x) - c * ||x||_q over the simplex when both
/// penalties are active: projected gradient ascent with backtracking, started
/// from the single-penalty closed forms. Only reached for instances that mix
/// a reward regularizer with an s-rectangular transition ball.
BRResult maximize_composite(const numvec& g, const Regularizer& reward_reg, prec_t ball_coeff,
                            prec_t ball_q) {
    const size_t n = g.size();
    const Regularizer ball = Regularizer::pnorm(ball_coeff, ball_q);
    auto objective = [&](const numvec& x) {
        return dot(g, x) - stage::reg_value(reward_reg, x) - stage::reg_value(ball, x);
    };

    BRResult best;
    best.value = -INF;
    auto consider = [&](const numvec& x) {
        const prec_t f = objective(x);
        if (f > best.value) best = {x, f};
    };
    consider(stage::best_response_regularized(g, reward_reg).x);
    consider(stage::best_response_regularized(g, ball).x);
    consider(numvec(n, 1.0 / static_cast<prec_t>(n)));

    numvec x = best.x;
    prec_t fx = best.value;
    for (int it = 0; it < 4000; it++) {
        numvec grad = stage::reg_gradient(reward_reg, x);
        const numvec bgrad = stage::reg_gradient(ball, x);
        for (size_t i = 0; i < n; i++) grad[i] = g[i] - grad[i] - bgrad[i];
        prec_t step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; bt++) {
            numvec cand(n);
            for (size_t i = 0; i < n; i++) cand[i] = x[i] + step * grad[i];
            cand = stage::project_simplex(cand);
            const prec_t fc = objective(cand);
            if (fc > fx + 1e-15) {
                prec_t delta = 0.0;
                for (size_t i = 0; i < n; i++) delta = std::max(delta, std::abs(cand[i] - x[i]));
                x = std::move(cand);
                fx = fc;
                moved = delta > 1e-13;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    consider(x);
    return best;
}

BRResult stage_best_response(const StageDecomposition& dec) {
    BRResult res;
    if (dec.ball_coeff > 0.0 && dec.reward_reg.coeff > 0.0 &&
        dec.reward_reg.kind != Regularizer::Kind::none) {
        res = maximize_composite(dec.g, dec.reward_reg, dec.ball_coeff, dec.ball_q);
    } else if (dec.ball_coeff > 0.0) {
        res = stage::best_response_regularized(
            dec.g, Regularizer::pnorm(dec.ball_coeff, dec.ball_q));
    } else {
        res = stage::best_response_regularized(dec.g, dec.reward_reg);
    }
    res.value += dec.constant;
    return res;
}

/// <map(x), x> = ||x||_p with ||map(x)||_{p*} = 1 (zero vector for x = 0).
numvec norm_duality_map(const numvec& x, prec_t p) {
    const size_t n = x.size();
    numvec out(n, 0.0);
    const prec_t norm = lp_norm(x, p);
    if (norm <= 0.0) return out;
    if (std::isinf(p)) {
        size_t am = 0;
        for (size_t i = 1; i < n; i++)
            if (std::abs(x[i]) > std::abs(x[am])) am = i;
        out[am] = x[am] >= 0.0 ? 1.0 : -1.0;
    } else if (p <= 1.0) {
        for (size_t i = 0; i < n; i++) out[i] = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
    } else {
        for (size_t i = 0; i < n; i++) {
            const prec_t t = std::pow(std::abs(x[i]) / norm, p - 1.0);
            out[i] = x[i] >= 0.0 ? t : -t;
        }
    }
    return out;
}

std::string stage_label(int step, int state) {
    return "step " + std::to_string(step) + ", state " + std::to_string(state);
}

/// Own-major pair index (a_own * n_others + k_others) -> instance joint index.
/// Empty for player 0, whose own action is already the slowest coordinate.
std::vector<size_t> own_major_joint_map(const RMGInstance& inst, int player) {
    if (player == 0) return {};
    const size_t n_own = static_cast<size_t>(inst.num_actions[player]);
    const size_t n_opp = inst.num_joint_actions_excluding(player);
    std::vector<size_t> map(n_own * n_opp);
    for (size_t a = 0; a < n_own; a++)
        for (size_t b = 0; b < n_opp; b++)
            map[a * n_opp + b] = merge_joint_index(inst, player, static_cast<int>(a), b);
    return map;
}

} // namespace

prec_t robust_stage_q(const RMGInstance& inst, int player, int step, int state,
                      const Policy& policy, const numvec& vnext) {
    const numvec mu = joint_distribution(inst, policy, step, state);
    prec_t val = dot(mu, inst.rewards[player][step][state]);

    if (const RewardUncertainty* u = inst.reward_set(player, step, state)) {
        const numvec& own = policy[player][step][state];
        const numvec nu = joint_distribution_excluding(inst, policy, step, state, player);
        const RewardUncertainty* opp =
            inst.num_players == 2 ? inst.reward_set(1 - player, step, state) : nullptr;
        const std::vector<size_t> jmap = own_major_joint_map(inst, player);
        val -= support::support_value(*u, opp, own, nu, jmap.empty() ? nullptr : &jmap);
    }
    if (step < inst.horizon - 1 && !vnext.empty())
        val -= duals::transition_support(inst, step, state, vnext, mu);
    return val;
}

EvalResult robust_policy_eval(const RMGInstance& inst, const Policy& policy) {
    validate_policy(inst, policy);
    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);

    EvalResult res;
    res.values.assign(inst.num_players, std::vector<numvec>(H, numvec(S, 0.0)));
    for (int i = 0; i < inst.num_players; i++) {
        for (size_t h = H; h-- > 0;) {
            const numvec vnext = h + 1 < H ? res.values[i][h + 1] : numvec{};
            for (size_t s = 0; s < S; s++)
                res.values[i][h][s] = robust_stage_q(inst, i, static_cast<int>(h),
                                                     static_cast<int>(s), policy, vnext);
        }
        res.initial.push_back(res.values[i][0][static_cast<size_t>(inst.initial_state)]);
    }
    return res;
}

EvalResult nominal_policy_eval(const RMGInstance& inst, const Policy& policy) {
    validate_policy(inst, policy);
    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);

    EvalResult res;
    res.values.assign(inst.num_players, std::vector<numvec>(H, numvec(S, 0.0)));
    for (int i = 0; i < inst.num_players; i++) {
        for (size_t h = H; h-- > 0;) {
            for (size_t s = 0; s < S; s++) {
                const numvec mu =
                    joint_distribution(inst, policy, static_cast<int>(h), static_cast<int>(s));
                prec_t val = dot(mu, inst.rewards[i][h][s]);
                if (h + 1 < H) {
                    const auto& kernels = inst.transitions[h][s];
                    const numvec& vnext = res.values[i][h + 1];
                    for (size_t k = 0; k < mu.size(); k++)
                        if (mu[k] > 0.0) val += mu[k] * dot(kernels[k], vnext);
                }
                res.values[i][h][s] = val;
            }
        }
        res.initial.push_back(res.values[i][0][static_cast<size_t>(inst.initial_state)]);
    }
    return res;
}

BestResponseResult robust_best_response(const RMGInstance& inst, int player,
                                        const Policy& policy) {
    validate_policy(inst, policy);
    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);

    BestResponseResult res;
    res.br.assign(H, std::vector<numvec>(S));
    res.values.assign(H, numvec(S, 0.0));
    for (size_t h = H; h-- > 0;) {
        const numvec vnext = h + 1 < H ? res.values[h + 1] : numvec{};
        for (size_t s = 0; s < S; s++) {
            const numvec nu = joint_distribution_excluding(inst, policy, static_cast<int>(h),
                                                           static_cast<int>(s), player);
            const auto dec = stage_decomposition(inst, player, static_cast<int>(h),
                                                 static_cast<int>(s), nu, vnext);
            auto br = stage_best_response(dec);
            res.values[h][s] = br.value;
            res.br[h][s] = std::move(br.x);
        }
    }
    res.initial = res.values[0][static_cast<size_t>(inst.initial_state)];
    return res;
}

GapResult rne_gap(const RMGInstance& inst, const Policy& policy) {
    const EvalResult eval = robust_policy_eval(inst, policy);
    GapResult res;
    for (int i = 0; i < inst.num_players; i++) {
        const auto br = robust_best_response(inst, i, policy);
        res.per_player.push_back(br.initial - eval.initial[i]);
    }
    res.max_gap = *std::max_element(res.per_player.begin(), res.per_player.end());
    return res;
}

PlanResult solve_tpzs_rmg(const RMGInstance& inst, prec_t eps, size_t stage_iteration_cap) {
    if (inst.num_players != 2)
        throw std::invalid_argument(
            "the zero-sum planner handles exactly two players; use "
            "solve_small_general_sum_rmg for small general-sum instances");
    if (!inst.zero_sum)
        throw std::invalid_argument(
            "instance is not marked zero-sum; use solve_small_general_sum_rmg");

    for (const auto& [key, u] : inst.reward_sets) {
        const auto& [pl, h, s] = key;
        if (!support::separable_in_own_marginal(u))
            throw std::invalid_argument(
                "reward uncertainty for player " + std::to_string(pl) + " at " +
                stage_label(h, s) +
                " does not separate in the player's own marginal; use "
                "solve_small_general_sum_rmg");
        const bool penalized = (u.family == RewardUncertainty::Family::opnorm && u.alpha > 0.0) ||
                               (u.family == RewardUncertainty::Family::kernel && u.tau > 0.0);
        if (!penalized) continue;
        const RewardUncertainty* opp = inst.reward_set(1 - pl, h, s);
        if (!u.aligned_offset || opp == nullptr || !opp->aligned_offset)
            throw std::invalid_argument(
                "reward uncertainty at " + stage_label(h, s) +
                " is not offset-aligned across the two players, so stage games are "
                "not zero-sum; use solve_small_general_sum_rmg");
    }
    for (const auto& [key, t] : inst.transition_sets)
        if (t.rect != TransitionUncertainty::Rect::sa)
            throw std::invalid_argument(
                "transition uncertainty at " + stage_label(key.first, key.second) +
                " is s-rectangular; the zero-sum planner supports only "
                "(s,a)-rectangular sets; use solve_small_general_sum_rmg");

    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);
    const size_t n1 = static_cast<size_t>(inst.num_actions[0]);
    const size_t n2 = static_cast<size_t>(inst.num_actions[1]);
    const prec_t stage_eps = eps / (2.0 * static_cast<prec_t>(H));

    PlanResult res;
    res.policy.assign(2, std::vector<std::vector<numvec>>(H, std::vector<numvec>(S)));
    res.values.assign(H, numvec(S, 0.0));
    bool all_stages_converged = true;

    for (size_t h = H; h-- > 0;) {
        for (size_t s = 0; s < S; s++) {
            Matrix M(n1, n2);
            const numvec& reward = inst.rewards[0][h][s];
            const TransitionUncertainty* t =
                h + 1 < H ? inst.transition_set(static_cast<int>(h), static_cast<int>(s))
                          : nullptr;
            for (size_t k = 0; k < n1 * n2; k++) {
                prec_t entry = reward[k];
                if (h + 1 < H) {
                    const numvec& pbar = inst.transitions[h][s][k];
                    entry += t ? -duals::worst_case(*t, k, res.values[h + 1], pbar).value
                               : dot(pbar, res.values[h + 1]);
                }
                M.data[k] = entry;
            }
            Regularizer reg1, reg2;
            if (const auto* u = inst.reward_set(0, static_cast<int>(h), static_cast<int>(s)))
                reg1 = support::regularizer_from_uncertainty(*u, 1.0);
            if (const auto* u = inst.reward_set(1, static_cast<int>(h), static_cast<int>(s)))
                reg2 = support::regularizer_from_uncertainty(*u, 1.0);

            const auto saddle =
                stage::solve_zs_regularized(M, reg1, reg2, stage_eps, stage_iteration_cap);
            all_stages_converged = all_stages_converged && saddle.converged;
            res.values[h][s] = saddle.value;
            res.policy[0][h][s] = saddle.x;
            res.policy[1][h][s] = saddle.y;
        }
    }

    res.initial = robust_policy_eval(inst, res.policy).initial;
    res.gap = rne_gap(inst, res.policy);
    res.certified = all_stages_converged && res.gap.max_gap <= eps;
    return res;
}

PlanResult solve_small_general_sum_rmg(const RMGInstance& inst, prec_t eps) {
    if (inst.num_players != 2)
        throw std::invalid_argument("the general-sum solver handles exactly two players");
    if (inst.num_actions[0] > 4 || inst.num_actions[1] > 4)
        throw std::invalid_argument(
            "the general-sum solver enumerates supports and is limited to at most "
            "4 actions per player");
    if (inst.has_transition_uncertainty())
        throw std::invalid_argument(
            "the general-sum solver supports reward uncertainty only");
    for (const auto& [key, u] : inst.reward_sets) {
        if (u.family != RewardUncertainty::Family::singleton &&
            u.family != RewardUncertainty::Family::interval)
            throw std::invalid_argument(
                "the general-sum solver supports singleton and interval reward "
                "uncertainty, whose worst case folds into the payoff matrices");
        if (u.aligned_offset)
            throw std::invalid_argument(
                "offset-aligned reward uncertainty is a zero-sum construction and is "
                "not supported by the general-sum solver");
    }

    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);
    const size_t n1 = static_cast<size_t>(inst.num_actions[0]);
    const size_t n2 = static_cast<size_t>(inst.num_actions[1]);

    PlanResult res;
    res.policy.assign(2, std::vector<std::vector<numvec>>(H, std::vector<numvec>(S)));
    res.values.assign(H, numvec(S, 0.0));
    std::vector<std::vector<numvec>> w(2, std::vector<numvec>(H + 1, numvec(S, 0.0)));

    for (size_t h = H; h-- > 0;) {
        for (size_t s = 0; s < S; s++) {
            Matrix payoff[2] = {Matrix(n1, n2), Matrix(n1, n2)};
            for (int i = 0; i < 2; i++) {
                const numvec& reward = inst.rewards[i][h][s];
                const auto* u = inst.reward_set(i, static_cast<int>(h), static_cast<int>(s));
                for (size_t k = 0; k < n1 * n2; k++) {
                    prec_t entry = reward[k];
                    if (u && u->family == RewardUncertainty::Family::interval)
                        entry += u->lower[k];
                    if (h + 1 < H) entry += dot(inst.transitions[h][s][k], w[i][h + 1]);
                    payoff[i].data[k] = entry;
                }
            }
            const auto equilibria = stage::support_enumeration_ne(payoff[0], payoff[1]);
            if (equilibria.empty())
                throw std::runtime_error("support enumeration found no stage equilibrium at " +
                                         stage_label(static_cast<int>(h), static_cast<int>(s)));
            const auto& [x, y] = equilibria.front();
            res.policy[0][h][s] = x;
            res.policy[1][h][s] = y;
            w[0][h][s] = payoff[0].quad(x, y);
            w[1][h][s] = payoff[1].quad(x, y);
            res.values[h][s] = w[0][h][s];
        }
    }

    res.initial = robust_policy_eval(inst, res.policy).initial;
    res.gap = rne_gap(inst, res.policy);
    res.certified = res.gap.max_gap <= eps;
    return res;
}

bool has_iterative_duals(const RMGInstance& inst) {
    for (const auto& [key, t] : inst.transition_sets)
        if (t.family == TransitionUncertainty::Family::kl ||
            t.family == TransitionUncertainty::Family::chi2)
            return true;
    return false;
}

EquivalenceResult equivalence_check(const RMGInstance& inst, const Policy& policy) {
    for (const auto& [key, u] : inst.reward_sets) {
        if (u.aligned_offset)
            throw std::invalid_argument(
                "offset-aligned reward uncertainty has no realized-model form");
        if (u.family == RewardUncertainty::Family::kernel && u.kernel == KernelKind::renyi)
            throw std::invalid_argument(
                "renyi kernels have no per-action worst-case realization");
    }
    validate_policy(inst, policy);

    EquivalenceResult res;
    res.support_path = robust_policy_eval(inst, policy);

    const size_t S = static_cast<size_t>(inst.num_states);
    const size_t H = static_cast<size_t>(inst.horizon);
    auto& rp = res.realization_path;
    rp.values.assign(inst.num_players, std::vector<numvec>(H, numvec(S, 0.0)));

    for (int i = 0; i < inst.num_players; i++) {
        for (size_t h = H; h-- > 0;) {
            const numvec vnext = h + 1 < H ? rp.values[i][h + 1] : numvec{};
            for (size_t s = 0; s < S; s++) {
                const numvec mu =
                    joint_distribution(inst, policy, static_cast<int>(h), static_cast<int>(s));
                numvec reward = inst.rewards[i][h][s];
                if (const auto* u =
                        inst.reward_set(i, static_cast<int>(h), static_cast<int>(s))) {
                    const numvec& own = policy[i][h][s];
                    const numvec nu = joint_distribution_excluding(
                        inst, policy, static_cast<int>(h), static_cast<int>(s), i);
                    const std::vector<size_t> jmap = own_major_joint_map(inst, i);
                    const numvec pert = support::worst_case_perturbation(
                        *u, own, nu, jmap.empty() ? nullptr : &jmap);
                    for (size_t k = 0; k < reward.size(); k++) reward[k] += pert[k];
                }
                prec_t val = dot(mu, reward);

                if (h + 1 < H) {
                    const auto* t =
                        inst.transition_set(static_cast<int>(h), static_cast<int>(s));
                    const auto& kernels = inst.transitions[h][s];
                    if (t == nullptr) {
                        for (size_t k = 0; k < mu.size(); k++)
                            if (mu[k] > 0.0) val += mu[k] * dot(kernels[k], vnext);
                    } else if (t->rect == TransitionUncertainty::Rect::sa) {
                        for (size_t k = 0; k < mu.size(); k++) {
                            if (mu[k] <= 0.0) continue;
                            const auto dual = duals::worst_case(*t, k, vnext, kernels[k]);
                            val += mu[k] * dot(dual.worst, vnext);
                        }
                    } else {
                        // realized s-rectangular ball member: a rank-one shift of
                        // the whole kernel along the norm duality maps
                        const prec_t beta = t->radius[0];
                        const numvec u_map = norm_duality_map(vnext, t->p);
                        const numvec w_map = norm_duality_map(mu, dual_exponent(t->p));
                        for (size_t k = 0; k < mu.size(); k++) {
                            if (mu[k] <= 0.0) continue;
                            prec_t inner = dot(kernels[k], vnext);
                            inner -= beta * w_map[k] * dot(u_map, vnext);
                            val += mu[k] * inner;
                        }
                    }
                }
                rp.values[i][h][s] = val;
            }
        }
        rp.initial.push_back(rp.values[i][0][static_cast<size_t>(inst.initial_state)]);
    }

    for (int i = 0; i < inst.num_players; i++)
        for (size_t h = 0; h < H; h++)
            for (size_t s = 0; s < S; s++)
                res.max_diff = std::max(
                    res.max_diff,
                    std::abs(res.support_path.values[i][h][s] - rp.values[i][h][s]));
    return res;
}

} // namespace rmg::plan

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/transition_duals.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmg::duals {

namespace {

constexpr prec_t GOLD = 0.6180339887498949;  // (sqrt(5)-1)/2

/// Golden-section minimization of a unimodal function on [lo, hi].
template <typename F>
prec_t golden_min(F&& f, prec_t lo, prec_t hi, prec_t xtol = 1e-13, int max_iter = 200) {
    prec_t a = lo, b = hi;
    prec_t x1 = b - GOLD * (b - a), x2 = a + GOLD * (b - a);
    prec_t f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > xtol * (1.0 + std::abs(a) + std::abs(b)); it++) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLD * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLD * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

void check_inputs(const numvec& v, const numvec& pbar, prec_t beta) {
    if (v.size() != pbar.size())
        throw std::invalid_argument("worst_case: value and distribution sizes differ");
    if (v.empty()) throw std::invalid_argument("worst_case: empty inputs");
    if (beta < 0 || !std::isfinite(beta))
        throw std::invalid_argument("worst_case: radius must be finite and >= 0");
}

DualResult nominal_result(const numvec& v, const numvec& pbar) {
    DualResult r;
    r.worst = pbar;
    r.value = -dot(pbar, v);
    return r;
}

} // namespace

DualResult worst_case_tv(const numvec& v, const numvec& pbar, prec_t beta) {
    check_inputs(v, pbar, beta);
    if (beta == 0.0) return nominal_result(v, pbar);

    DualResult r;
    r.worst = pbar;
    const sizvec order = sort_indexes_stable(v);  // ascending in v

    // Move up to beta mass onto the smallest-v state, taking it from the
    // largest-v states first.
    const size_t lo = order[0];
    prec_t budget = std::min(beta, 1.0 - pbar[lo]);
    r.worst[lo] += budget;
    for (size_t k = order.size(); k-- > 0 && budget > 0;) {
        const size_t i = order[k];
        if (i == lo) continue;
        const prec_t take = std::min(budget, pbar[i]);
        r.worst[i] -= take;
        budget -= take;
    }
    r.value = -dot(r.worst, v);
    return r;
}

DualResult worst_case_kl(const numvec& v, const numvec& pbar, prec_t beta) {
    check_inputs(v, pbar, beta);
    if (beta == 0.0) return nominal_result(v, pbar);

    // Support of the nominal; states outside it can never receive mass.
    prec_t vmin = INF, vmax = -INF;
    for (size_t i = 0; i < v.size(); i++) {
        if (pbar[i] > 0) {
            vmin = std::min(vmin, v[i]);
            vmax = std::max(vmax, v[i]);
        }
    }
    if (vmax - vmin < 1e-15) return nominal_result(v, pbar);

    // f(lam) = lam*beta + lam * log sum_i pbar_i exp(-v_i/lam), convex.
    const auto f = [&](prec_t lam) {
        prec_t m = -INF;
        for (size_t i = 0; i < v.size(); i++)
            if (pbar[i] > 0) m = std::max(m, -v[i] / lam);
        prec_t s = 0.0;
        for (size_t i = 0; i < v.size(); i++)
            if (pbar[i] > 0) s += pbar[i] * std::exp(-v[i] / lam - m);
        return lam * beta + lam * (m + std::log(s));
    };
    const prec_t lam_hi = (vmax - vmin + 1.0) / beta;
    const prec_t lam_star = golden_min(f, 1e-8, lam_hi);

    // Candidates: interior, lam -> 0 limit (-min v over support).
    prec_t value = std::min(f(lam_star), -vmin);

    // Worst distribution: exponential tilt, pushed to the feasible side.
    const auto tilt = [&](prec_t lam) {
        numvec w(v.size(), 0.0);
        prec_t m = -INF;
        for (size_t i = 0; i < v.size(); i++)
            if (pbar[i] > 0) m = std::max(m, -v[i] / lam);
        prec_t total = 0.0;
        for (size_t i = 0; i < v.size(); i++) {
            if (pbar[i] > 0) {
                w[i] = pbar[i] * std::exp(-v[i] / lam - m);
                total += w[i];
            }
        }
        for (auto& x : w) x /= total;
        return w;
    };
    prec_t lam_feas = lam_star;
    numvec w = tilt(lam_feas);
    if (kl_divergence(w, pbar) > beta) {
        // KL(tilt(lam) || pbar) decreases in lam; bisect to the boundary.
        prec_t a = lam_feas, b = lam_hi;
        for (int it = 0; it < 200; it++) {
            const prec_t mid = 0.5 * (a + b);
            if (kl_divergence(tilt(mid), pbar) > beta) a = mid;
            else b = mid;
        }
        lam_feas = b;
        w = tilt(lam_feas);
    }
    DualResult r;
    r.value = value;
    r.worst = std::move(w);
    r.lambda = lam_star;
    return r;
}

DualResult worst_case_chi2(const numvec& v, const numvec& pbar, prec_t beta) {
    check_inputs(v, pbar, beta);
    if (beta == 0.0) return nominal_result(v, pbar);

    // --- value: truncation form, minimized per segment of sorted values ---
    const auto g = [&](prec_t t) {
        prec_t mean = 0.0;
        for (size_t i = 0; i < v.size(); i++) mean += pbar[i] * std::min(v[i], t);
        prec_t var = 0.0;
        for (size_t i = 0; i < v.size(); i++) {
            const prec_t d = std::min(v[i], t) - mean;
            var += pbar[i] * d * d;
        }
        return -mean + std::sqrt(beta * var);
    };
    numvec levels(v);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    prec_t value = g(levels.back());
    for (prec_t t : levels) value = std::min(value, g(t));
    for (size_t k = 0; k + 1 < levels.size(); k++) {
        const prec_t t = golden_min(g, levels[k], levels[k + 1]);
        value = std::min(value, g(t));
    }

    // --- maximizer: active-set KKT for max <p,-v> over the ball ------------
    // On the active set A the maximizer is
    //   p_i = pbar_i / P_A - s * pbar_i * (v_i - m_A),
    // with s chosen to use the radius left after the zeroed coordinates.
    const size_t n = v.size();
    std::vector<bool> zero(n, false);
    numvec p(pbar);
    for (size_t round = 0; round < n; round++) {
        prec_t PA = 0.0, mA = 0.0, zmass = 0.0;
        for (size_t i = 0; i < n; i++) {
            if (zero[i]) zmass += pbar[i];
            else {
                PA += pbar[i];
                mA += pbar[i] * v[i];
            }
        }
        if (PA <= 0) break;
        mA /= PA;
        prec_t varA = 0.0;
        for (size_t i = 0; i < n; i++)
            if (!zero[i]) varA += (pbar[i] / PA) * (v[i] - mA) * (v[i] - mA);
        const prec_t delta = 1.0 / PA - 1.0;
        const prec_t radicand = beta - zmass - delta * delta * PA;
        prec_t s = 0.0;
        if (varA > 1e-30 && radicand > 0) s = std::sqrt(radicand / (PA * varA));
        bool negative = false;
        for (size_t i = 0; i < n; i++) {
            p[i] = zero[i] ? 0.0 : pbar[i] / PA - s * pbar[i] * (v[i] - mA);
            if (p[i] < -1e-15) negative = true;
        }
        if (!negative) break;
        // Zero the worst offender (largest v among negatives) and iterate.
        size_t drop = 0;
        prec_t worst_v = -INF;
        for (size_t i = 0; i < n; i++) {
            if (!zero[i] && p[i] < -1e-15 && v[i] > worst_v) {
                worst_v = v[i];
                drop = i;
            }
        }
        zero[drop] = true;
    }
    for (auto& x : p)
        if (x < 0) x = 0.0;

    DualResult r;
    r.value = value;
    r.worst = std::move(p);
    return r;
}

DualResult worst_case_wasserstein(const numvec& v, const numvec& pbar, prec_t beta,
                                  const numvec& rho) {
    check_inputs(v, pbar, beta);
    const size_t n = v.size();
    if (rho.size() != n * n)
        throw std::invalid_argument("worst_case_wasserstein: metric has wrong dimension");
    if (beta == 0.0) return nominal_result(v, pbar);

    // obj(lam) = lam*beta + sum_s pbar_s max_j (-v_j - lam*rho(s,j)),
    // convex piecewise-linear; its minimum is attained at a breakpoint or 0.
    const auto obj = [&](prec_t lam) {
        prec_t total = lam * beta;
        for (size_t s = 0; s < n; s++) {
            if (pbar[s] <= 0) continue;
            prec_t inner = -INF;
            for (size_t j = 0; j < n; j++)
                inner = std::max(inner, -v[j] - lam * rho[s * n + j]);
            total += pbar[s] * inner;
        }
        return total;
    };
    numvec candidates{0.0};
    for (size_t s = 0; s < n; s++) {
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                const prec_t dr = rho[s * n + i] - rho[s * n + j];
                if (std::abs(dr) > 1e-15) {
                    const prec_t lam = (v[j] - v[i]) / dr;
                    if (lam > 0 && std::isfinite(lam)) candidates.push_back(lam);
                }
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    prec_t lam_star = 0.0, best = obj(0.0);
    for (prec_t lam : candidates) {
        const prec_t val = obj(lam);
        if (val < best - 1e-15) {
            best = val;
            lam_star = lam;
        }
    }

    // Primal transport: send each source to the cheapest tied destination,
    // then spend any remaining budget upgrading mass to tied destinations
    // with larger rho (each unit of cost buys lam_star of value).
    numvec p(n, 0.0);
    struct Upgrade {
        size_t src, dst;
        prec_t gain_rho;
    };
    std::vector<Upgrade> upgrades;
    numvec base_dst(n, 0);
    prec_t base_cost = 0.0;
    for (size_t s = 0; s < n; s++) {
        if (pbar[s] <= 0) continue;
        prec_t inner = -INF;
        for (size_t j = 0; j < n; j++)
            inner = std::max(inner, -v[j] - lam_star * rho[s * n + j]);
        size_t jbase = n;
        for (size_t j = 0; j < n; j++) {
            if (-v[j] - lam_star * rho[s * n + j] >= inner - 1e-11) {
                if (jbase == n || rho[s * n + j] < rho[s * n + jbase]) jbase = j;
            }
        }
        base_dst[s] = static_cast<prec_t>(jbase);
        base_cost += pbar[s] * rho[s * n + jbase];
        for (size_t j = 0; j < n; j++) {
            if (j == jbase) continue;
            if (-v[j] - lam_star * rho[s * n + j] >= inner - 1e-11 &&
                rho[s * n + j] > rho[s * n + jbase])
                upgrades.push_back({s, j, rho[s * n + j] - rho[s * n + jbase]});
        }
    }
    numvec moved(n, 0.0);  // mass moved away from the base destination, per source
    if (lam_star > 0) {
        prec_t budget = beta - base_cost;
        std::stable_sort(upgrades.begin(), upgrades.end(), [](const Upgrade& a, const Upgrade& b) {
            if (a.src != b.src) return a.src < b.src;
            return a.gain_rho > b.gain_rho;
        });
        for (const auto& up : upgrades) {
            if (budget <= 1e-15) break;
            const prec_t avail = pbar[up.src] - moved[up.src];
            if (avail <= 0) continue;
            const prec_t m = std::min(avail, budget / up.gain_rho);
            p[up.dst] += m;
            moved[up.src] += m;
            budget -= m * up.gain_rho;
        }
    }
    for (size_t s = 0; s < n; s++) {
        if (pbar[s] <= 0) continue;
        p[static_cast<size_t>(base_dst[s])] += pbar[s] - moved[s];
    }

    DualResult r;
    r.value = best;
    r.worst = std::move(p);
    r.lambda = lam_star;
    return r;
}

DualResult worst_case(const TransitionUncertainty& u, size_t joint_action, const numvec& v,
                      const numvec& pbar) {
    const prec_t beta = u.radius_for(joint_action);
    switch (u.family) {
    case TransitionUncertainty::Family::tv: return worst_case_tv(v, pbar, beta);
    case TransitionUncertainty::Family::kl: return worst_case_kl(v, pbar, beta);
    case TransitionUncertainty::Family::chi2: return worst_case_chi2(v, pbar, beta);
    case TransitionUncertainty::Family::wasserstein:
        return worst_case_wasserstein(v, pbar, beta, u.metric);
    case TransitionUncertainty::Family::lp_ball: break;
    }
    throw std::invalid_argument("worst_case: lp_ball sets are s-rectangular, not (s,a)");
}

prec_t sa_rect_support(const RMGInstance& inst, int step, int state, const numvec& vnext,
                       const numvec& mu_joint) {
    const TransitionUncertainty* u = inst.transition_set(step, state);
    assert(u != nullptr && u->rect == TransitionUncertainty::Rect::sa);
    prec_t total = 0.0;
    for (size_t k = 0; k < mu_joint.size(); k++) {
        if (mu_joint[k] <= 0) continue;
        total += mu_joint[k] * worst_case(*u, k, vnext, inst.transitions[step][state][k]).value;
    }
    return total;
}

prec_t s_rect_ball_support(const RMGInstance& inst, int step, int state,
                           const TransitionUncertainty& u, const numvec& vnext,
                           const numvec& mu_joint) {
    const prec_t beta = u.radius[0];
    prec_t nominal = 0.0;
    for (size_t k = 0; k < mu_joint.size(); k++) {
        if (mu_joint[k] == 0) continue;
        nominal += mu_joint[k] * dot(inst.transitions[step][state][k], vnext);
    }
    const prec_t qdual = std::isinf(u.p) ? 1.0 : (u.p == 1.0 ? INF : u.p / (u.p - 1.0));
    return -nominal + beta * lp_norm(vnext, u.p) * lp_norm(mu_joint, qdual);
}

prec_t transition_support(const RMGInstance& inst, int step, int state, const numvec& vnext,
                          const numvec& mu_joint) {
    assert(step >= 0 && step + 1 < inst.horizon);
    const TransitionUncertainty* u = inst.transition_set(step, state);
    if (u == nullptr) {
        prec_t nominal = 0.0;
        for (size_t k = 0; k < mu_joint.size(); k++) {
            if (mu_joint[k] == 0) continue;
            nominal += mu_joint[k] * dot(inst.transitions[step][state][k], vnext);
        }
        return -nominal;
    }
    if (u->rect == TransitionUncertainty::Rect::s)
        return s_rect_ball_support(inst, step, state, *u, vnext, mu_joint);
    return sa_rect_support(inst, step, state, vnext, mu_joint);
}

} // namespace rmg::duals

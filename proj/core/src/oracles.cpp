// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rmg::oracle {

namespace {

prec_t dual_exponent(prec_t p) {
    if (std::isinf(p)) return 1.0;
    if (p <= 1.0) return INF;
    return p / (p - 1.0);
}

numvec normal_vector(RNG& rng, size_t n) {
    numvec out(n);
    for (auto& o : out) o = rng.normal();
    return out;
}

/// Binomial coefficient with saturation (guards the enumeration size).
double choose(size_t n, size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (size_t i = 0; i < k; i++) {
        r *= static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (r > 1e18) return 1e18;
    }
    return r;
}

} // namespace

LPResult lp_enumerate(const numvec& c, const Matrix& aeq, const numvec& beq, const Matrix& aub,
                      const numvec& bub) {
    const size_t d = c.size();
    const size_t me = aeq.rows, mu = aub.rows;
    if ((me > 0 && aeq.cols != d) || (mu > 0 && aub.cols != d) || beq.size() != me ||
        bub.size() != mu)
        throw std::invalid_argument("linear program shapes disagree");
    if (me > d) throw std::invalid_argument("more equality constraints than variables");

    const size_t k = d - me;           // active constraints to pick
    const size_t pool = mu + d;        // inequality rows + nonnegativity bounds
    if (choose(pool, k) > 2e5)
        throw std::invalid_argument("vertex enumeration would exceed the candidate guard");

    LPResult best;
    Eigen::MatrixXd sys(d, d);
    Eigen::VectorXd rhs(d);

    std::vector<size_t> pick(k);
    for (size_t i = 0; i < k; i++) pick[i] = i;
    bool done = k > pool;  // nothing to pick from

    const prec_t FEAS = 1e-9;
    while (!done) {
        sys.setZero();
        rhs.setZero();
        for (size_t r = 0; r < me; r++) {
            for (size_t cidx = 0; cidx < d; cidx++) sys(r, cidx) = aeq(r, cidx);
            rhs(r) = beq[r];
        }
        for (size_t i = 0; i < k; i++) {
            const size_t idx = pick[i];
            const size_t r = me + i;
            if (idx < mu) {
                for (size_t cidx = 0; cidx < d; cidx++) sys(r, cidx) = aub(idx, cidx);
                rhs(r) = bub[idx];
            } else {
                sys(r, idx - mu) = 1.0;  // bound x_j = 0
            }
        }

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys);
        if (qr.rank() == static_cast<Eigen::Index>(d)) {
            const Eigen::VectorXd sol = qr.solve(rhs);
            bool feas = true;
            for (size_t j = 0; j < d && feas; j++) feas = sol(j) >= -FEAS;
            for (size_t r = 0; r < me && feas; r++) {
                prec_t lhs = 0.0;
                for (size_t j = 0; j < d; j++) lhs += aeq(r, j) * sol(j);
                feas = std::abs(lhs - beq[r]) <= FEAS;
            }
            for (size_t r = 0; r < mu && feas; r++) {
                prec_t lhs = 0.0;
                for (size_t j = 0; j < d; j++) lhs += aub(r, j) * sol(j);
                feas = lhs <= bub[r] + FEAS;
            }
            if (feas) {
                prec_t val = 0.0;
                for (size_t j = 0; j < d; j++) val += c[j] * sol(j);
                if (!best.feasible || val > best.value) {
                    best.feasible = true;
                    best.value = val;
                    best.x.assign(d, 0.0);
                    for (size_t j = 0; j < d; j++) best.x[j] = sol(j);
                }
            }
        }

        // next combination (lexicographic)
        if (k == 0) break;
        size_t i = k;
        while (i-- > 0) {
            if (pick[i] + (k - i) < pool) {
                pick[i]++;
                for (size_t j = i + 1; j < k; j++) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0) done = true;
        }
    }
    return best;
}

prec_t tv_worst_lp(const numvec& v, const numvec& pbar, prec_t beta) {
    const size_t n = v.size();
    const size_t d = 2 * n;  // (p, t)
    numvec c(d, 0.0);
    for (size_t i = 0; i < n; i++) c[i] = -v[i];

    Matrix aeq(1, d);
    for (size_t i = 0; i < n; i++) aeq(0, i) = 1.0;
    numvec beq{1.0};

    Matrix aub(2 * n + 1, d);
    numvec bub(2 * n + 1, 0.0);
    for (size_t i = 0; i < n; i++) {
        aub(i, i) = 1.0;  //  p_i - t_i <= pbar_i
        aub(i, n + i) = -1.0;
        bub[i] = pbar[i];
        aub(n + i, i) = -1.0;  // -p_i - t_i <= -pbar_i
        aub(n + i, n + i) = -1.0;
        bub[n + i] = -pbar[i];
    }
    for (size_t i = 0; i < n; i++) aub(2 * n, n + i) = 1.0;  // sum t <= 2 beta
    bub[2 * n] = 2.0 * beta;

    const auto res = lp_enumerate(c, aeq, beq, aub, bub);
    if (!res.feasible) throw std::runtime_error("total-variation oracle found no vertex");
    return res.value;
}

prec_t wasserstein_worst_lp(const numvec& v, const numvec& pbar, prec_t beta,
                            const numvec& rho) {
    const size_t n = v.size();
    if (rho.size() != n * n)
        throw std::invalid_argument("ground metric size does not match the state count");
    const size_t d = n * n;  // transport plan, row-major (source, destination)
    numvec c(d, 0.0);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) c[i * n + j] = -v[j];

    Matrix aeq(n, d);
    numvec beq(pbar);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) aeq(i, i * n + j) = 1.0;

    Matrix aub(1, d);
    for (size_t k = 0; k < d; k++) aub(0, k) = rho[k];
    numvec bub{beta};

    const auto res = lp_enumerate(c, aeq, beq, aub, bub);
    if (!res.feasible) throw std::runtime_error("transport oracle found no vertex");
    return res.value;
}

prec_t chi2_worst_kkt(const numvec& v, const numvec& pbar, prec_t beta) {
    const size_t n = v.size();
    sizvec support;
    for (size_t i = 0; i < n; i++)
        if (pbar[i] > 0.0) support.push_back(i);
    const size_t m = support.size();
    if (m == 0) throw std::invalid_argument("nominal distribution has empty support");
    if (m > 16) throw std::invalid_argument("support enumeration oracle is limited to 16 states");

    prec_t best = -dot(pbar, v);  // the nominal itself is always feasible

    for (unsigned mask = 1; mask < (1u << m); mask++) {
        prec_t P = 0.0, mean = 0.0;
        for (size_t t = 0; t < m; t++)
            if (mask & (1u << t)) {
                P += pbar[support[t]];
                mean += pbar[support[t]] * v[support[t]];
            }
        if (P <= 0.0) continue;
        mean /= P;
        prec_t var = 0.0, zmass = 0.0;
        for (size_t t = 0; t < m; t++) {
            const size_t i = support[t];
            if (mask & (1u << t))
                var += pbar[i] * (v[i] - mean) * (v[i] - mean);
            else
                zmass += pbar[i];
        }
        var /= P;
        const prec_t delta = 1.0 / P - 1.0;
        const prec_t rad = beta - zmass - delta * delta * P;
        if (rad < -1e-14) continue;

        numvec p(n, 0.0);
        if (var <= 1e-16) {
            for (size_t t = 0; t < m; t++)
                if (mask & (1u << t)) p[support[t]] = pbar[support[t]] / P;
        } else {
            const prec_t tcoef = std::sqrt(std::max(rad, 0.0) / (P * var));
            bool ok = true;
            for (size_t t = 0; t < m && ok; t++)
                if (mask & (1u << t)) {
                    const size_t i = support[t];
                    p[i] = pbar[i] * (1.0 / P - tcoef * (v[i] - mean));
                    ok = p[i] >= -1e-12;
                }
            if (!ok) continue;
            for (auto& pi : p) pi = std::max(pi, 0.0);
        }

        prec_t chi2 = 0.0, sum = 0.0;
        for (size_t i = 0; i < n; i++) {
            sum += p[i];
            if (pbar[i] > 0.0) chi2 += (p[i] - pbar[i]) * (p[i] - pbar[i]) / pbar[i];
        }
        if (std::abs(sum - 1.0) > 1e-9 || chi2 > beta * (1.0 + 1e-9) + 1e-12) continue;
        best = std::max(best, -dot(p, v));
    }
    return best;
}

prec_t kl_worst_tilt(const numvec& v, const numvec& pbar, prec_t beta) {
    const size_t n = v.size();
    if (beta <= 0.0) return -dot(pbar, v);

    prec_t vmin = INF;
    for (size_t i = 0; i < n; i++)
        if (pbar[i] > 0.0) vmin = std::min(vmin, v[i]);

    auto tilt = [&](prec_t lambda, numvec& w) {
        prec_t sum = 0.0;
        for (size_t i = 0; i < n; i++) {
            w[i] = pbar[i] > 0.0 ? pbar[i] * std::exp(-(v[i] - vmin) / lambda) : 0.0;
            sum += w[i];
        }
        for (auto& wi : w) wi /= sum;
        prec_t kl = 0.0;
        for (size_t i = 0; i < n; i++)
            if (w[i] > 0.0) kl += w[i] * std::log(w[i] / pbar[i]);
        return kl;
    };

    numvec w(n, 0.0);
    if (tilt(1e-10, w) <= beta) return -vmin;  // the point mass is affordable

    prec_t lo = 1e-10, hi = 1.0;
    for (int it = 0; it < 200 && tilt(hi, w) > beta; it++) hi *= 2.0;
    for (int it = 0; it < 200; it++) {
        const prec_t mid = 0.5 * (lo + hi);
        (tilt(mid, w) > beta ? lo : hi) = mid;
    }
    tilt(hi, w);  // feasible side
    return -dot(w, v);
}

prec_t rank1_induced_norm(const numvec& u, const numvec& w, prec_t from, prec_t to) {
    return lp_norm(w, dual_exponent(from)) * lp_norm(u, to);
}

prec_t induced_norm(const Matrix& R, prec_t from, prec_t to, RNG& rng, size_t trials) {
    const size_t rows = R.rows, cols = R.cols;
    if (rows == 0 || cols == 0) return 0.0;

    auto image_norm = [&](const numvec& x) { return lp_norm(R.mul(x), to); };

    if (from == 1.0) {
        prec_t best = 0.0;
        for (size_t j = 0; j < cols; j++) {
            numvec col(rows);
            for (size_t i = 0; i < rows; i++) col[i] = R(i, j);
            best = std::max(best, lp_norm(col, to));
        }
        return best;
    }
    if (std::isinf(from) && cols <= 16) {
        prec_t best = 0.0;
        for (unsigned mask = 0; mask < (1u << cols); mask++) {
            numvec x(cols);
            for (size_t j = 0; j < cols; j++) x[j] = (mask & (1u << j)) ? 1.0 : -1.0;
            best = std::max(best, image_norm(x));
        }
        return best;
    }

    prec_t best = 0.0;
    for (size_t t = 0; t < trials; t++) {
        numvec x = normal_vector(rng, cols);
        const prec_t nx = lp_norm(x, from);
        if (nx <= 0.0) continue;
        best = std::max(best, image_norm(x) / nx);
    }
    return best;
}

numvec sample_ball_member(const TransitionUncertainty& u, size_t joint_action,
                          const numvec& pbar, RNG& rng) {
    const size_t n = pbar.size();
    const prec_t beta = u.radius_for(joint_action);
    if (beta <= 0.0) return pbar;

    // random target restricted to the nominal's support so divergences stay
    // finite, then a feasible step toward it
    numvec q = random_distribution(rng, n);
    prec_t qsum = 0.0;
    for (size_t i = 0; i < n; i++) {
        if (pbar[i] <= 0.0 && u.family != TransitionUncertainty::Family::tv &&
            u.family != TransitionUncertainty::Family::wasserstein)
            q[i] = 0.0;
        qsum += q[i];
    }
    if (qsum <= 0.0) return pbar;
    for (auto& qi : q) qi /= qsum;

    auto blend = [&](prec_t s) {
        numvec p(n);
        for (size_t i = 0; i < n; i++) p[i] = pbar[i] + s * (q[i] - pbar[i]);
        return p;
    };

    switch (u.family) {
    case TransitionUncertainty::Family::tv: {
        prec_t l1 = 0.0;
        for (size_t i = 0; i < n; i++) l1 += std::abs(q[i] - pbar[i]);
        if (l1 <= 1e-15) return pbar;
        return blend(std::min(1.0, 2.0 * beta / l1) * rng.u01());
    }
    case TransitionUncertainty::Family::chi2: {
        prec_t c2 = 0.0;
        for (size_t i = 0; i < n; i++)
            if (pbar[i] > 0.0) c2 += (q[i] - pbar[i]) * (q[i] - pbar[i]) / pbar[i];
        if (c2 <= 1e-18) return pbar;
        return blend(std::min(1.0, std::sqrt(beta / c2)) * rng.u01());
    }
    case TransitionUncertainty::Family::kl: {
        auto kl_at = [&](prec_t s) {
            const numvec p = blend(s);
            prec_t kl = 0.0;
            for (size_t i = 0; i < n; i++)
                if (p[i] > 0.0) kl += p[i] * std::log(p[i] / pbar[i]);
            return kl;
        };
        prec_t smax = 1.0;
        if (kl_at(1.0) > beta) {
            prec_t lo = 0.0, hi = 1.0;
            for (int it = 0; it < 100; it++) {
                const prec_t mid = 0.5 * (lo + hi);
                (kl_at(mid) > beta ? hi : lo) = mid;
            }
            smax = lo;
        }
        return blend(smax * rng.u01());
    }
    case TransitionUncertainty::Family::wasserstein: {
        if (u.metric.size() != n * n)
            throw std::invalid_argument("ground metric size does not match the state count");
        numvec p(pbar);
        prec_t budget = beta * rng.u01();
        for (size_t moves = 0; moves < 2 * n; moves++) {
            const size_t src = rng.index(n), dst = rng.index(n);
            if (src == dst || p[src] <= 1e-12) continue;
            const prec_t cost = u.metric[src * n + dst];
            const prec_t cap = cost <= 1e-15 ? p[src] : std::min(p[src], budget / cost);
            const prec_t amount = cap * rng.u01();
            p[src] -= amount;
            p[dst] += amount;
            budget -= amount * cost;
        }
        return p;
    }
    case TransitionUncertainty::Family::lp_ball:
        throw std::invalid_argument(
            "s-rectangular ball members are whole kernels, not single distributions");
    }
    return pbar;
}

namespace {

// Local convex-regularizer evaluations for the kernel families, written from
// the definitions rather than shared with rmg::support (independent oracle).
prec_t kernel_omega(const RewardUncertainty& u, const numvec& z) {
    prec_t s = 0.0;
    switch (u.kernel) {
    case KernelKind::shannon:
        for (prec_t x : z) s += x * std::log(x);
        return u.tau * s;
    case KernelKind::kl_reference:
        for (size_t i = 0; i < z.size(); i++) s += z[i] * std::log(z[i] / u.reference[i]);
        return u.tau * s;
    case KernelKind::tsallis:
        for (prec_t x : z) s += x * (x - 1.0);
        return u.tau * s / 2.0;
    case KernelKind::renyi: break;
    }
    throw std::invalid_argument("kernel_omega: no member construction for this kernel");
}

numvec kernel_omega_gradient(const RewardUncertainty& u, const numvec& z) {
    numvec g(z.size());
    switch (u.kernel) {
    case KernelKind::shannon:
        for (size_t i = 0; i < z.size(); i++) g[i] = u.tau * (1.0 + std::log(z[i]));
        return g;
    case KernelKind::kl_reference:
        for (size_t i = 0; i < z.size(); i++)
            g[i] = u.tau * (1.0 + std::log(z[i] / u.reference[i]));
        return g;
    case KernelKind::tsallis:
        for (size_t i = 0; i < z.size(); i++) g[i] = u.tau * (z[i] - 0.5);
        return g;
    case KernelKind::renyi: break;
    }
    throw std::invalid_argument("kernel_omega_gradient: unsupported kernel");
}

numvec dirichlet_point(RNG& rng, size_t n) {
    numvec z(n);
    prec_t total = 0.0;
    for (auto& x : z) {
        x = -std::log(std::max(rng.u01(), 1e-300)) + 1e-9;
        total += x;
    }
    for (auto& x : z) x /= total;
    return z;
}

} // namespace

SupportWitness oracle_set_support(const RewardUncertainty& u, size_t n_own, size_t n_opp,
                                  const numvec& y, const OracleConfig& cfg,
                                  const std::vector<size_t>* joint_map) {
    const size_t njoint = n_own * n_opp;
    if (y.size() != njoint)
        throw std::invalid_argument("oracle_set_support: direction has wrong dimension");
    const auto storage = [&](size_t own, size_t opp) {
        const size_t k = own * n_opp + opp;
        return joint_map ? (*joint_map)[k] : k;
    };
    RNG rng(cfg.seed);
    SupportWitness best;

    const auto consider = [&](const numvec& member) {
        prec_t v = 0.0;
        for (size_t k = 0; k < njoint; k++) v += member[k] * y[k];
        if (v > best.value) best = {v, member};
    };

    switch (u.family) {
    case RewardUncertainty::Family::singleton:
        best = {0.0, numvec(njoint, 0.0)};
        return best;
    case RewardUncertainty::Family::interval: {
        if (u.lower.size() != njoint)
            throw std::invalid_argument("oracle_set_support: interval bounds mismatch");
        numvec member(njoint);
        for (size_t t = 0; t < std::max<size_t>(cfg.samples, 1); t++) {
            for (size_t k = 0; k < njoint; k++)
                member[k] = u.lower[k] + rng.u01() * (u.upper[k] - u.lower[k]);
            // coordinate ascent over the box lands on the optimal corner
            for (size_t k = 0; k < njoint; k++)
                member[k] = y[k] >= 0.0 ? u.upper[k] : u.lower[k];
            consider(member);
        }
        return best;
    }
    case RewardUncertainty::Family::opnorm: {
        // Members parameterized as exactly-normalized rank-one matrices
        // alpha * a b^T / (||a||_{p*} ||b||_{q*}); random restarts plus
        // coordinate hill climbing in (a, b).
        const prec_t pstar = dual_exponent(u.p);
        const prec_t qstar = dual_exponent(u.q);
        const auto rank1_value = [&](const numvec& a, const numvec& b) {
            const prec_t norm = lp_norm(a, pstar) * lp_norm(b, qstar);
            if (norm <= 0.0) return -INF;
            prec_t v = 0.0;
            for (size_t i = 0; i < n_own; i++)
                for (size_t j = 0; j < n_opp; j++) v += a[i] * b[j] * y[storage(i, j)];
            return u.alpha * v / norm;
        };
        numvec besta, bestb;
        prec_t bestv = -INF;
        const size_t restarts = std::max<size_t>(cfg.samples / 50, 4);
        for (size_t t = 0; t < restarts; t++) {
            numvec a = normal_vector(rng, n_own);
            numvec b = normal_vector(rng, n_opp);
            prec_t v = rank1_value(a, b);
            prec_t step = 0.5;
            for (size_t it = 0; it < cfg.local_steps; it++) {
                bool improved = false;
                for (size_t i = 0; i < n_own + n_opp; i++) {
                    numvec& target = i < n_own ? a : b;
                    const size_t idx = i < n_own ? i : i - n_own;
                    const prec_t prev = target[idx];
                    for (const prec_t delta : {step, -step}) {
                        target[idx] = prev + delta;
                        const prec_t cand = rank1_value(a, b);
                        if (cand > v) {
                            v = cand;
                            improved = true;
                            break;
                        }
                        target[idx] = prev;
                    }
                }
                if (!improved) step *= 0.5;
                if (step < 1e-12) break;
            }
            if (v > bestv) {
                bestv = v;
                besta = a;
                bestb = b;
            }
        }
        numvec member(njoint, 0.0);
        const prec_t norm = lp_norm(besta, pstar) * lp_norm(bestb, qstar);
        for (size_t i = 0; i < n_own; i++)
            for (size_t j = 0; j < n_opp; j++)
                member[storage(i, j)] = u.alpha * besta[i] * bestb[j] / norm;
        consider(member);
        return best;
    }
    case RewardUncertainty::Family::kernel: {
        if (u.kernel == KernelKind::renyi)
            throw std::invalid_argument(
                "oracle_set_support: no member construction for renyi kernels");
        // Supporting hyperplanes of the convex regularizer: for interior z,
        // the member g = -grad(z) + (<z, grad(z)> - omega(z)) * 1, extended
        // constantly across opponent actions, satisfies <-x, g> <= omega(x)
        // for every distribution x, with equality at x = z.
        numvec yown(n_own, 0.0);
        for (size_t i = 0; i < n_own; i++)
            for (size_t j = 0; j < n_opp; j++) yown[i] += y[storage(i, j)];
        const auto member_of = [&](const numvec& z) {
            const numvec grad = kernel_omega_gradient(u, z);
            prec_t beta = -kernel_omega(u, z);
            for (size_t i = 0; i < n_own; i++) beta += z[i] * grad[i];
            numvec member(njoint);
            for (size_t i = 0; i < n_own; i++)
                for (size_t j = 0; j < n_opp; j++) member[storage(i, j)] = -grad[i] + beta;
            return member;
        };
        const auto plane_value = [&](const numvec& z) {
            const numvec m = member_of(z);
            prec_t v = 0.0;
            for (size_t k = 0; k < njoint; k++) v += m[k] * y[k];
            return v;
        };
        numvec bestz = dirichlet_point(rng, n_own);
        prec_t bestv = plane_value(bestz);
        for (size_t t = 1; t < std::max<size_t>(cfg.samples / 20, 2); t++) {
            const numvec z = dirichlet_point(rng, n_own);
            const prec_t v = plane_value(z);
            if (v > bestv) {
                bestv = v;
                bestz = z;
            }
        }
        // local improvement: pairwise mass transfers on the simplex
        prec_t step = 0.25;
        for (size_t it = 0; it < cfg.local_steps; it++) {
            bool improved = false;
            for (size_t i = 0; i < n_own && !improved; i++)
                for (size_t j = 0; j < n_own && !improved; j++) {
                    if (i == j) continue;
                    const prec_t amount = std::min(step, bestz[i] - 1e-9);
                    if (amount <= 0.0) continue;
                    numvec z = bestz;
                    z[i] -= amount;
                    z[j] += amount;
                    const prec_t v = plane_value(z);
                    if (v > bestv) {
                        bestv = v;
                        bestz = z;
                        improved = true;
                    }
                }
            if (!improved) step *= 0.5;
            if (step < 1e-14) break;
        }
        consider(member_of(bestz));
        return best;
    }
    }
    throw std::logic_error("oracle_set_support: unhandled family");
}

GridPoint oracle_simplex_grid_max(const std::function<prec_t(const numvec&)>& objective,
                                  size_t dim, size_t resolution) {
    if (dim == 0 || resolution == 0)
        throw std::invalid_argument("oracle_simplex_grid_max: empty grid");
    if (choose(resolution + dim - 1, dim - 1) > 2e7)
        throw std::invalid_argument("oracle_simplex_grid_max: grid too large");

    GridPoint best;
    std::vector<size_t> counts(dim, 0);
    numvec x(dim);
    // odometer over compositions of `resolution` into `dim` nonnegative parts
    const std::function<void(size_t, size_t)> walk = [&](size_t pos, size_t left) {
        if (pos + 1 == dim) {
            counts[pos] = left;
            for (size_t i = 0; i < dim; i++)
                x[i] = static_cast<prec_t>(counts[i]) / static_cast<prec_t>(resolution);
            const prec_t v = objective(x);
            if (v > best.value) best = {x, v};
            return;
        }
        for (size_t c = 0; c <= left; c++) {
            counts[pos] = c;
            walk(pos + 1, left - c);
        }
    };
    walk(0, resolution);
    return best;
}

MCEstimate oracle_mc_eval(const RMGInstance& inst, const Policy& policy, size_t rollouts,
                          uint64_t seed) {
    if (rollouts == 0) throw std::invalid_argument("oracle_mc_eval: rollouts must be positive");
    const int N = inst.num_players;
    const auto sample_from = [](RNG& rng, const numvec& dist) {
        const prec_t r = rng.u01();
        prec_t acc = 0.0;
        for (size_t i = 0; i < dist.size(); i++) {
            acc += dist[i];
            if (r < acc) return i;
        }
        return dist.size() - 1;
    };

    std::vector<numvec> totals(static_cast<size_t>(N));
    RNG rng(seed);
    std::vector<int> profile(static_cast<size_t>(N));
    for (size_t t = 0; t < rollouts; t++) {
        int s = inst.initial_state;
        numvec ret(static_cast<size_t>(N), 0.0);
        for (int h = 0; h < inst.horizon; h++) {
            for (int i = 0; i < N; i++)
                profile[static_cast<size_t>(i)] = static_cast<int>(sample_from(
                    rng, policy[static_cast<size_t>(i)][static_cast<size_t>(h)]
                               [static_cast<size_t>(s)]));
            const size_t k = inst.joint_index(profile);
            for (int i = 0; i < N; i++)
                ret[static_cast<size_t>(i)] +=
                    inst.rewards[static_cast<size_t>(i)][static_cast<size_t>(h)]
                                [static_cast<size_t>(s)][k];
            if (h + 1 < inst.horizon)
                s = static_cast<int>(sample_from(
                    rng,
                    inst.transitions[static_cast<size_t>(h)][static_cast<size_t>(s)][k]));
        }
        for (int i = 0; i < N; i++) totals[static_cast<size_t>(i)].push_back(ret[static_cast<size_t>(i)]);
    }

    MCEstimate est;
    est.value.resize(static_cast<size_t>(N));
    est.std_error.assign(static_cast<size_t>(N), 0.0);
    for (int i = 0; i < N; i++) {
        const numvec& v = totals[static_cast<size_t>(i)];
        prec_t mean = 0.0;
        for (prec_t x : v) mean += x;
        mean /= static_cast<prec_t>(v.size());
        est.value[static_cast<size_t>(i)] = mean;
        if (v.size() > 1) {
            prec_t ss = 0.0;
            for (prec_t x : v) ss += (x - mean) * (x - mean);
            est.std_error[static_cast<size_t>(i)] =
                std::sqrt(ss / static_cast<prec_t>(v.size() - 1)) /
                std::sqrt(static_cast<prec_t>(v.size()));
        }
    }
    return est;
}

Matrix sample_opnorm_member(size_t rows, size_t cols, prec_t alpha, prec_t p, prec_t q,
                            RNG& rng) {
    Matrix R(rows, cols);
    const prec_t pstar = dual_exponent(p);
    if (rng.u01() < 0.5) {
        // rank-one member with an exactly known norm
        const numvec u = normal_vector(rng, rows);
        const numvec w = normal_vector(rng, cols);
        const prec_t norm = lp_norm(u, pstar) * lp_norm(w, dual_exponent(q));
        if (norm <= 0.0) return R;
        const prec_t scale = alpha * rng.u01() / norm;
        for (size_t i = 0; i < rows; i++)
            for (size_t j = 0; j < cols; j++) R(i, j) = scale * u[i] * w[j];
        return R;
    }
    // dense member scaled by the column-norm upper bound
    //   ||R||_{q -> p*} <= cols^(1 - 1/q) * max_j ||col_j||_{p*}
    for (auto& e : R.data) e = rng.normal();
    prec_t colmax = 0.0;
    for (size_t j = 0; j < cols; j++) {
        numvec col(rows);
        for (size_t i = 0; i < rows; i++) col[i] = R(i, j);
        colmax = std::max(colmax, lp_norm(col, pstar));
    }
    const prec_t expo = std::isinf(q) ? 1.0 : 1.0 - 1.0 / q;
    const prec_t bound = std::pow(static_cast<prec_t>(cols), expo) * colmax;
    if (bound <= 0.0) return R;
    const prec_t scale = alpha * rng.u01() / bound;
    for (auto& e : R.data) e *= scale;
    return R;
}

} // namespace rmg::oracle

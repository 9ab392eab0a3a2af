// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/stage_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

namespace rmg::stage {

namespace {

constexpr prec_t TINY = 1e-300;

/// Entropy-type regularizers admit a closed-form KL prox; the rest are folded
/// into the operator as gradients.
bool prox_friendly(const Regularizer& reg) {
    return reg.coeff > 0.0 &&
           (reg.kind == Regularizer::Kind::shannon || reg.kind == Regularizer::Kind::kl_reference);
}

numvec scaled(const numvec& v, prec_t c) {
    numvec out(v);
    for (auto& o : out) o *= c;
    return out;
}

void subtract_scaled(numvec& v, const numvec& g, prec_t c) {
    for (size_t i = 0; i < v.size(); i++) v[i] -= c * g[i];
}

/// Deterministic argmax (lowest index wins ties).
size_t argmax_index(const numvec& v) {
    size_t best = 0;
    for (size_t i = 1; i < v.size(); i++)
        if (v[i] > v[best]) best = i;
    return best;
}

} // namespace

numvec reg_gradient(const Regularizer& reg, const numvec& x) {
    const size_t n = x.size();
    numvec g(n, 0.0);
    if (reg.coeff <= 0.0) return g;
    switch (reg.kind) {
    case Regularizer::Kind::none:
        break;
    case Regularizer::Kind::shannon:
        for (size_t i = 0; i < n; i++)
            g[i] = reg.coeff * (1.0 + std::log(std::max(x[i], 1e-12)));
        break;
    case Regularizer::Kind::kl_reference:
        for (size_t i = 0; i < n; i++)
            g[i] = reg.coeff * (1.0 + std::log(std::max(x[i], 1e-12) / reg.reference[i]));
        break;
    case Regularizer::Kind::tsallis:
        for (size_t i = 0; i < n; i++) g[i] = reg.coeff * (x[i] - 0.5);
        break;
    case Regularizer::Kind::pnorm: {
        if (std::isinf(reg.p)) {
            // subgradient of alpha * max_i x_i
            size_t am = 0;
            for (size_t i = 1; i < n; i++)
                if (x[i] > x[am]) am = i;
            g[am] = reg.coeff;
        } else if (reg.p <= 1.0) {
            // alpha * sum x_i is constant on the simplex
        } else {
            const prec_t norm = std::max(lp_norm(x, reg.p), TINY);
            for (size_t i = 0; i < n; i++)
                g[i] = reg.coeff * std::pow(std::max(x[i], 0.0) / norm, reg.p - 1.0);
        }
        break;
    }
    case Regularizer::Kind::renyi: {
        const prec_t rho = reg.order;
        prec_t spow = 0.0;
        for (size_t i = 0; i < n; i++) spow += std::pow(std::max(x[i], 1e-12), rho);
        const prec_t scale = reg.coeff * rho / (rho - 1.0) / std::max(spow, TINY);
        for (size_t i = 0; i < n; i++)
            g[i] = scale * std::pow(std::max(x[i], 1e-12), rho - 1.0);
        break;
    }
    }
    return g;
}

namespace {

/// Upper bound on ||grad Omega||_inf over the simplex, used in the step size.
prec_t reg_gradient_bound(const Regularizer& reg, size_t n) {
    if (reg.coeff <= 0.0 || prox_friendly(reg)) return 0.0;
    switch (reg.kind) {
    case Regularizer::Kind::none:
        return 0.0;
    case Regularizer::Kind::tsallis:
        return reg.coeff;
    case Regularizer::Kind::pnorm:
        return reg.coeff;
    case Regularizer::Kind::renyi: {
        const prec_t rho = reg.order;
        return reg.coeff * rho / std::abs(rho - 1.0) * static_cast<prec_t>(n);
    }
    default:
        return reg.coeff;
    }
}

/// Entropic prox step: argmax_w <b, w> - eta * Omega(w) - KL(w || z), with
/// Omega restricted to shannon / kl_reference (closed form) or absent.
numvec entropic_prox(const numvec& z, const numvec& b, prec_t eta, const Regularizer& reg) {
    const size_t n = z.size();
    const bool composite = prox_friendly(reg);
    const prec_t denom = composite ? 1.0 + eta * reg.coeff : 1.0;
    numvec logits(n);
    for (size_t i = 0; i < n; i++) {
        prec_t t = std::log(std::max(z[i], TINY)) + b[i];
        if (composite && reg.kind == Regularizer::Kind::kl_reference)
            t += eta * reg.coeff * std::log(reg.reference[i]);
        logits[i] = t / denom;
    }
    const prec_t m = *std::max_element(logits.begin(), logits.end());
    numvec w(n);
    prec_t sum = 0.0;
    for (size_t i = 0; i < n; i++) {
        w[i] = std::exp(logits[i] - m);
        sum += w[i];
    }
    for (auto& wi : w) wi /= sum;
    return w;
}

BRResult br_pnorm(const numvec& v, prec_t alpha, prec_t p) {
    const size_t n = v.size();
    BRResult res;
    res.x.assign(n, 0.0);
    if (p <= 1.0) {
        // Omega is constant (= alpha) on the simplex
        const size_t am = argmax_index(v);
        res.x[am] = 1.0;
        res.value = v[am] - alpha;
        return res;
    }
    if (std::isinf(p)) {
        // uniform over a top set: value_k = (sum of k largest - alpha) / k
        auto order = sort_indexes_stable(v);
        std::reverse(order.begin(), order.end());
        prec_t run = 0.0, best = -INF;
        size_t best_k = 1;
        for (size_t k = 1; k <= n; k++) {
            run += v[order[k - 1]];
            const prec_t val = (run - alpha) / static_cast<prec_t>(k);
            if (val > best + 1e-15) {
                best = val;
                best_k = k;
            }
        }
        for (size_t k = 0; k < best_k; k++) res.x[order[k]] = 1.0 / static_cast<prec_t>(best_k);
        res.value = best;
        return res;
    }
    // Stationarity gives x_i proportional to ((v_i - nu)_+ / alpha)^(1/(p-1))
    // where nu solves sum ((v_i - nu)_+ / alpha)^(p/(p-1)) = 1; the optimal
    // objective value then equals nu itself.
    const prec_t vmax = *std::max_element(v.begin(), v.end());
    const prec_t expo = p / (p - 1.0);
    auto excess = [&](prec_t nu) {
        prec_t s = 0.0;
        for (const auto vi : v) {
            const prec_t t = vi - nu;
            if (t > 0.0) s += std::pow(t / alpha, expo);
        }
        return s - 1.0;
    };
    prec_t lo = vmax - alpha, hi = vmax;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(vmax)); it++) {
        const prec_t mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const prec_t nu = 0.5 * (lo + hi);
    prec_t sum = 0.0;
    for (size_t i = 0; i < n; i++) {
        const prec_t t = v[i] - nu;
        res.x[i] = t > 0.0 ? std::pow(t / alpha, 1.0 / (p - 1.0)) : 0.0;
        sum += res.x[i];
    }
    for (auto& xi : res.x) xi /= sum;
    res.value = nu;
    return res;
}

BRResult br_renyi(const numvec& v, const Regularizer& reg) {
    // Projected gradient ascent with backtracking; deterministic start at the
    // uniform distribution. Only used for diagnostics, never on a fast path.
    const size_t n = v.size();
    numvec x(n, 1.0 / static_cast<prec_t>(n));
    auto objective = [&](const numvec& z) { return dot(v, z) - reg_value(reg, z); };
    prec_t fx = objective(x);
    for (int it = 0; it < 5000; it++) {
        numvec grad = reg_gradient(reg, x);
        for (size_t i = 0; i < n; i++) grad[i] = v[i] - grad[i];
        prec_t step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; bt++) {
            numvec cand(n);
            for (size_t i = 0; i < n; i++) cand[i] = x[i] + step * grad[i];
            cand = project_simplex(cand);
            const prec_t fc = objective(cand);
            if (fc > fx + 1e-14) {
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
    return {x, fx};
}

} // namespace

numvec project_simplex(const numvec& v) {
    const size_t n = v.size();
    numvec u(v);
    std::sort(u.begin(), u.end(), std::greater<prec_t>());
    prec_t css = 0.0, theta = 0.0;
    size_t k = 0;
    for (size_t i = 0; i < n; i++) {
        css += u[i];
        const prec_t t = (css - 1.0) / static_cast<prec_t>(i + 1);
        if (u[i] - t > 0.0) {
            k = i + 1;
            theta = t;
        }
    }
    (void)k;
    numvec out(n);
    for (size_t i = 0; i < n; i++) out[i] = std::max(v[i] - theta, 0.0);
    return out;
}

prec_t reg_value(const Regularizer& reg, const numvec& x) {
    if (reg.coeff <= 0.0) return 0.0;
    switch (reg.kind) {
    case Regularizer::Kind::none:
        return 0.0;
    case Regularizer::Kind::shannon: {
        prec_t s = 0.0;
        for (const auto xi : x) s += xlogx(xi);
        return reg.coeff * s;
    }
    case Regularizer::Kind::kl_reference: {
        if (reg.reference.size() != x.size())
            throw std::invalid_argument("kl_reference regularizer has a mismatched reference");
        prec_t s = 0.0;
        for (size_t i = 0; i < x.size(); i++)
            if (x[i] > 0.0) s += x[i] * std::log(x[i] / reg.reference[i]);
        return reg.coeff * s;
    }
    case Regularizer::Kind::tsallis: {
        prec_t s = 0.0;
        for (const auto xi : x) s += xi * (xi - 1.0);
        return reg.coeff * 0.5 * s;
    }
    case Regularizer::Kind::renyi: {
        prec_t s = 0.0;
        for (const auto xi : x)
            if (xi > 0.0) s += std::pow(xi, reg.order);
        return reg.coeff / (reg.order - 1.0) * std::log(s);
    }
    case Regularizer::Kind::pnorm:
        return reg.coeff * lp_norm(x, reg.p);
    }
    return 0.0;
}

BRResult best_response_regularized(const numvec& v, const Regularizer& reg) {
    if (v.empty()) throw std::invalid_argument("best response over an empty action set");
    const size_t n = v.size();
    const bool plain = reg.coeff <= 0.0 || reg.kind == Regularizer::Kind::none;
    if (plain) {
        BRResult res;
        res.x.assign(n, 0.0);
        const size_t am = argmax_index(v);
        res.x[am] = 1.0;
        res.value = v[am];
        return res;
    }
    switch (reg.kind) {
    case Regularizer::Kind::shannon: {
        BRResult res;
        res.x.resize(n);
        const prec_t tau = reg.coeff;
        numvec scl = scaled(v, 1.0 / tau);
        const prec_t lse = logsumexp(scl);
        for (size_t i = 0; i < n; i++) res.x[i] = std::exp(scl[i] - lse);
        res.value = tau * lse;
        return res;
    }
    case Regularizer::Kind::kl_reference: {
        if (reg.reference.size() != n)
            throw std::invalid_argument("kl_reference regularizer has a mismatched reference");
        BRResult res;
        res.x.resize(n);
        const prec_t tau = reg.coeff;
        numvec logits(n);
        for (size_t i = 0; i < n; i++) logits[i] = v[i] / tau + std::log(reg.reference[i]);
        const prec_t lse = logsumexp(logits);
        for (size_t i = 0; i < n; i++) res.x[i] = std::exp(logits[i] - lse);
        res.value = tau * lse;
        return res;
    }
    case Regularizer::Kind::tsallis: {
        BRResult res;
        res.x = project_simplex(scaled(v, 1.0 / reg.coeff));
        res.value = dot(v, res.x) - reg_value(reg, res.x);
        return res;
    }
    case Regularizer::Kind::pnorm:
        return br_pnorm(v, reg.coeff, reg.p);
    case Regularizer::Kind::renyi:
        return br_renyi(v, reg);
    default:
        throw std::logic_error("unhandled regularizer kind");
    }
}

prec_t zs_exploitability(const Matrix& M, const Regularizer& reg1, const Regularizer& reg2,
                         const numvec& x, const numvec& y) {
    const auto br1 = best_response_regularized(M.mul(y), reg1);
    numvec neg_mtx = M.tmul(x);
    for (auto& t : neg_mtx) t = -t;
    const auto br2 = best_response_regularized(neg_mtx, reg2);
    return br1.value + reg_value(reg2, y) + br2.value + reg_value(reg1, x);
}

SaddleResult solve_zs_regularized(const Matrix& M, const Regularizer& reg1,
                                  const Regularizer& reg2, prec_t eps, size_t max_iterations) {
    const size_t n1 = M.rows, n2 = M.cols;
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("saddle problem with empty action sets");

    const prec_t lip =
        M.max_abs() + reg_gradient_bound(reg1, n1) + reg_gradient_bound(reg2, n2);
    const prec_t eta = lip > 0.0 ? 0.5 / lip : 1.0;

    numvec x(n1, 1.0 / static_cast<prec_t>(n1)), y(n2, 1.0 / static_cast<prec_t>(n2));
    numvec avg_x(n1, 0.0), avg_y(n2, 0.0);
    size_t avg_count = 0;

    SaddleResult best;
    best.exploitability = INF;
    auto consider = [&](const numvec& cx, const numvec& cy) {
        const prec_t e = zs_exploitability(M, reg1, reg2, cx, cy);
        if (e < best.exploitability) {
            best.x = cx;
            best.y = cy;
            best.exploitability = e;
            return true;
        }
        return false;
    };

    constexpr size_t CHECK_EVERY = 25;
    constexpr size_t STALL_CHECKS = 200;
    size_t checks_since_improvement = 0;
    size_t it = 0;
    for (; it < max_iterations; it++) {
        // lookahead step
        numvec bx = scaled(M.mul(y), eta);
        numvec by = scaled(M.tmul(x), -eta);
        if (!prox_friendly(reg1)) subtract_scaled(bx, reg_gradient(reg1, x), eta);
        if (!prox_friendly(reg2)) subtract_scaled(by, reg_gradient(reg2, y), eta);
        const numvec xh = entropic_prox(x, bx, eta, reg1);
        const numvec yh = entropic_prox(y, by, eta, reg2);

        // corrected step evaluated at the lookahead point
        bx = scaled(M.mul(yh), eta);
        by = scaled(M.tmul(xh), -eta);
        if (!prox_friendly(reg1)) subtract_scaled(bx, reg_gradient(reg1, xh), eta);
        if (!prox_friendly(reg2)) subtract_scaled(by, reg_gradient(reg2, yh), eta);
        x = entropic_prox(x, bx, eta, reg1);
        y = entropic_prox(y, by, eta, reg2);

        for (size_t i = 0; i < n1; i++) avg_x[i] += xh[i];
        for (size_t j = 0; j < n2; j++) avg_y[j] += yh[j];
        avg_count++;

        if ((it + 1) % CHECK_EVERY == 0 || it + 1 == max_iterations) {
            numvec mx = scaled(avg_x, 1.0 / static_cast<prec_t>(avg_count));
            numvec my = scaled(avg_y, 1.0 / static_cast<prec_t>(avg_count));
            bool improved = consider(mx, my);
            improved = consider(x, y) || improved;
            if (best.exploitability <= eps) break;
            checks_since_improvement = improved ? 0 : checks_since_improvement + 1;
            if (checks_since_improvement >= STALL_CHECKS) break;
        }
    }

    best.iterations = it + 1;
    best.converged = best.exploitability <= eps;
    best.value = M.quad(best.x, best.y) - reg_value(reg1, best.x) + reg_value(reg2, best.y);
    return best;
}

std::vector<std::pair<numvec, numvec>> support_enumeration_ne(const Matrix& A, const Matrix& B,
                                                              prec_t tol) {
    const size_t n1 = A.rows, n2 = A.cols;
    if (B.rows != n1 || B.cols != n2)
        throw std::invalid_argument("bimatrix payoff shapes disagree");
    if (n1 > 16 || n2 > 16)
        throw std::invalid_argument("support enumeration is limited to small games");

    std::vector<std::pair<numvec, numvec>> found;
    std::map<std::vector<long long>, bool> seen;

    // For support pair (S1, S2): opponent mixtures that equalize the supported
    // payoffs, solved as small least-squares systems.
    for (unsigned s1 = 1; s1 < (1u << n1); s1++) {
        sizvec supp1;
        for (size_t i = 0; i < n1; i++)
            if (s1 & (1u << i)) supp1.push_back(i);
        for (unsigned s2 = 1; s2 < (1u << n2); s2++) {
            sizvec supp2;
            for (size_t j = 0; j < n2; j++)
                if (s2 & (1u << j)) supp2.push_back(j);
            const size_t k1 = supp1.size(), k2 = supp2.size();

            // y and the equalized payoff u: A(i, .) y = u for i in S1, sum y = 1
            Eigen::MatrixXd lhs_y = Eigen::MatrixXd::Zero(k1 + 1, k2 + 1);
            Eigen::VectorXd rhs_y = Eigen::VectorXd::Zero(k1 + 1);
            for (size_t r = 0; r < k1; r++) {
                for (size_t c = 0; c < k2; c++) lhs_y(r, c) = A(supp1[r], supp2[c]);
                lhs_y(r, k2) = -1.0;
            }
            for (size_t c = 0; c < k2; c++) lhs_y(k1, c) = 1.0;
            rhs_y(k1) = 1.0;
            Eigen::VectorXd sol_y = lhs_y.colPivHouseholderQr().solve(rhs_y);
            if ((lhs_y * sol_y - rhs_y).cwiseAbs().maxCoeff() > 1e-8) continue;

            // x and the equalized payoff w: x^T B(., j) = w for j in S2, sum x = 1
            Eigen::MatrixXd lhs_x = Eigen::MatrixXd::Zero(k2 + 1, k1 + 1);
            Eigen::VectorXd rhs_x = Eigen::VectorXd::Zero(k2 + 1);
            for (size_t r = 0; r < k2; r++) {
                for (size_t c = 0; c < k1; c++) lhs_x(r, c) = B(supp1[c], supp2[r]);
                lhs_x(r, k1) = -1.0;
            }
            for (size_t c = 0; c < k1; c++) lhs_x(k2, c) = 1.0;
            rhs_x(k2) = 1.0;
            Eigen::VectorXd sol_x = lhs_x.colPivHouseholderQr().solve(rhs_x);
            if ((lhs_x * sol_x - rhs_x).cwiseAbs().maxCoeff() > 1e-8) continue;

            bool ok = true;
            numvec x(n1, 0.0), y(n2, 0.0);
            prec_t sx = 0.0, sy = 0.0;
            for (size_t c = 0; c < k2 && ok; c++) {
                if (sol_y(c) < -tol) ok = false;
                y[supp2[c]] = std::max(sol_y(c), 0.0);
                sy += y[supp2[c]];
            }
            for (size_t c = 0; c < k1 && ok; c++) {
                if (sol_x(c) < -tol) ok = false;
                x[supp1[c]] = std::max(sol_x(c), 0.0);
                sx += x[supp1[c]];
            }
            if (!ok || sx <= 0.0 || sy <= 0.0) continue;
            for (auto& xi : x) xi /= sx;
            for (auto& yi : y) yi /= sy;

            // full best-response check against all actions
            const numvec ay = A.mul(y);
            const numvec btx = B.tmul(x);
            const prec_t u = dot(x, ay), w = dot(btx, y);
            for (size_t i = 0; i < n1 && ok; i++) ok = ay[i] <= u + tol;
            for (size_t j = 0; j < n2 && ok; j++) ok = btx[j] <= w + tol;
            if (!ok) continue;

            std::vector<long long> key;
            key.reserve(n1 + n2);
            for (const auto xi : x) key.push_back(std::llround(xi * 1e7));
            for (const auto yi : y) key.push_back(std::llround(yi * 1e7));
            if (seen.emplace(std::move(key), true).second) found.emplace_back(x, y);
        }
    }
    return found;
}

} // namespace rmg::stage

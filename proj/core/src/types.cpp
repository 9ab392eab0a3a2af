// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmg {

numvec random_distribution(RNG& rng, size_t n) {
    // Dirichlet(1,..,1) via normalized exponentials.
    numvec out(n);
    prec_t total = 0.0;
    for (size_t i = 0; i < n; i++) {
        prec_t u = rng.u01();
        if (u < 1e-300) u = 1e-300;
        out[i] = -std::log(u);
        total += out[i];
    }
    for (auto& v : out) v /= total;
    return out;
}

prec_t logsumexp(const numvec& v) {
    assert(!v.empty());
    prec_t m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    prec_t s = 0.0;
    for (prec_t x : v) s += std::exp(x - m);
    return m + std::log(s);
}

prec_t lp_norm(const numvec& x, prec_t p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        prec_t m = 0.0;
        for (prec_t v : x) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 1.0) {
        prec_t s = 0.0;
        for (prec_t v : x) s += std::abs(v);
        return s;
    }
    prec_t s = 0.0;
    for (prec_t v : x) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

prec_t kl_divergence(const numvec& p, const numvec& q) {
    assert(p.size() == q.size());
    prec_t s = 0.0;
    for (size_t i = 0; i < p.size(); i++) {
        if (p[i] > 0) {
            if (q[i] <= 0) return INF;
            s += p[i] * std::log(p[i] / q[i]);
        }
    }
    return s;
}

sizvec sort_indexes_stable(const numvec& values) {
    sizvec idx(values.size());
    std::iota(idx.begin(), idx.end(), size_t(0));
    std::stable_sort(idx.begin(), idx.end(),
                     [&values](size_t a, size_t b) { return values[a] < values[b]; });
    return idx;
}

prec_t dot(const numvec& a, const numvec& b) {
    assert(a.size() == b.size());
    prec_t s = 0.0;
    for (size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
    return s;
}

bool is_distribution(const numvec& v, prec_t tol) {
    // Kahan summation so the check itself does not add error on long vectors.
    prec_t s = 0.0, comp = 0.0;
    for (prec_t x : v) {
        if (x < -tol || !std::isfinite(x)) return false;
        prec_t y = x - comp;
        prec_t t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return std::abs(s - 1.0) <= tol;
}

} // namespace rmg

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace rmg {

/// Default precision type used throughout the library.
using prec_t = double;
/// Default vector of numbers.
using numvec = std::vector<prec_t>;
/// Default vector of indices.
using indvec = std::vector<long>;
/// Vector of sizes.
using sizvec = std::vector<size_t>;

/// Tolerance used when validating probability distributions.
constexpr prec_t DIST_TOL = 1e-12;

/// Positive infinity shorthand (used for p = inf norms).
constexpr prec_t INF = std::numeric_limits<prec_t>::infinity();

// ---------------------------------------------------------------------------
// Deterministic random number generation.
//
// The library needs bit-reproducible streams that are independent of the
// platform's distribution implementations and of any threading schedule, so
// it uses splitmix64 directly with explicit mappings to [0,1).
// ---------------------------------------------------------------------------

/// Deterministic 64-bit generator (splitmix64).
class RNG {
public:
    explicit RNG(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    prec_t u01() { return static_cast<prec_t>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    prec_t uniform(prec_t a, prec_t b) { return a + (b - a) * u01(); }

    /// Uniform integer in [0, n).
    size_t index(size_t n) { return static_cast<size_t>(u01() * static_cast<prec_t>(n)) % n; }

    /// Standard normal via Box-Muller (deterministic).
    prec_t normal() {
        prec_t u1 = u01(), u2 = u01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Derive an independent child seed for stream `stream`; used so that
    /// parallel workers consume disjoint deterministic streams.
    static uint64_t derive(uint64_t seed, uint64_t stream) {
        RNG r(seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
        r.next();
        return r.next();
    }

private:
    uint64_t state_;
};

/// Flat Dirichlet(1,...,1) sample of dimension n.
numvec random_distribution(RNG& rng, size_t n);

// ---------------------------------------------------------------------------
// Small numeric helpers shared across modules.
// ---------------------------------------------------------------------------

/// log-sum-exp of a vector, stabilized.
prec_t logsumexp(const numvec& v);

/// lp-norm over a vector; p may be INF or 1 <= p < inf.
prec_t lp_norm(const numvec& x, prec_t p);

/// x * log(x) with the continuous extension 0 at x = 0.
inline prec_t xlogx(prec_t x) { return x > 0 ? x * std::log(x) : 0.0; }

/// KL divergence sum_i p_i log(p_i / q_i); requires q_i > 0 wherever p_i > 0.
prec_t kl_divergence(const numvec& p, const numvec& q);

/// Indices [0, n) sorted so that values[result[k]] is nondecreasing; ties are
/// broken by index so the order is deterministic.
sizvec sort_indexes_stable(const numvec& values);

/// Inner product; vectors must have equal length.
prec_t dot(const numvec& a, const numvec& b);

/// True if v is a probability distribution within DIST_TOL.
bool is_distribution(const numvec& v, prec_t tol = DIST_TOL);

// ---------------------------------------------------------------------------
// Dense row-major matrix, only as featureful as the library needs.
// ---------------------------------------------------------------------------

struct Matrix {
    size_t rows = 0, cols = 0;
    numvec data;

    Matrix() = default;
    Matrix(size_t r, size_t c, prec_t fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    Matrix(size_t r, size_t c, numvec d) : rows(r), cols(c), data(std::move(d)) {
        assert(data.size() == rows * cols);
    }

    prec_t& operator()(size_t r, size_t c) { return data[r * cols + c]; }
    prec_t operator()(size_t r, size_t c) const { return data[r * cols + c]; }

    /// M^T x
    numvec tmul(const numvec& x) const {
        assert(x.size() == rows);
        numvec out(cols, 0.0);
        for (size_t r = 0; r < rows; r++)
            for (size_t c = 0; c < cols; c++) out[c] += data[r * cols + c] * x[r];
        return out;
    }

    /// M y
    numvec mul(const numvec& y) const {
        assert(y.size() == cols);
        numvec out(rows, 0.0);
        for (size_t r = 0; r < rows; r++) out[r] = dot_row(r, y);
        return out;
    }

    prec_t dot_row(size_t r, const numvec& y) const {
        prec_t s = 0.0;
        for (size_t c = 0; c < cols; c++) s += data[r * cols + c] * y[c];
        return s;
    }

    /// x^T M y
    prec_t quad(const numvec& x, const numvec& y) const {
        assert(x.size() == rows && y.size() == cols);
        prec_t s = 0.0;
        for (size_t r = 0; r < rows; r++) s += x[r] * dot_row(r, y);
        return s;
    }

    prec_t max_abs() const {
        prec_t m = 0.0;
        for (prec_t v : data) m = std::max(m, std::abs(v));
        return m;
    }

    Matrix transpose() const {
        Matrix t(cols, rows);
        for (size_t r = 0; r < rows; r++)
            for (size_t c = 0; c < cols; c++) t(c, r) = (*this)(r, c);
        return t;
    }
};

} // namespace rmg

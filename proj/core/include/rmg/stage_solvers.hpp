// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#pragma once

#include <utility>

#include "rmg/types.hpp"

namespace rmg::stage {

/// Regularizer Omega on the simplex, as used by regularized stage games:
/// player 1 solves max_x <v, x> - Omega(x).
struct Regularizer {
    enum class Kind { none, shannon, kl_reference, tsallis, renyi, pnorm };
    Kind kind = Kind::none;
    prec_t coeff = 0.0;  // tau for kernels, alpha for pnorm
    prec_t p = 2.0;      // pnorm exponent
    numvec reference;    // kl_reference
    prec_t order = 2.0;  // renyi

    static Regularizer none() { return {}; }
    static Regularizer shannon(prec_t tau) { return {Kind::shannon, tau, 2.0, {}, 2.0}; }
    static Regularizer pnorm(prec_t alpha, prec_t p) { return {Kind::pnorm, alpha, p, {}, 2.0}; }
};

/// Omega(x).
prec_t reg_value(const Regularizer& reg, const numvec& x);

/// Gradient of Omega at x. Entropy-type gradients are clamped away from the
/// simplex boundary (where they diverge); intended for projected-gradient
/// fallbacks, not for exact stationarity checks.
numvec reg_gradient(const Regularizer& reg, const numvec& x);

struct BRResult {
    numvec x;
    prec_t value = 0.0;  // <v, x> - Omega(x) at the maximizer
};

/// Regularized best response: argmax_{x in simplex} <v, x> - Omega(x).
/// Closed form for none/shannon/kl_reference/tsallis; one-dimensional root
/// finding for pnorm; projected gradient with backtracking for renyi. Ties are
/// broken lexicographically so results are deterministic.
BRResult best_response_regularized(const numvec& v, const Regularizer& reg);

struct SaddleResult {
    numvec x, y;
    prec_t value = 0.0;           // x^T M y - Omega1(x) + Omega2(y)
    prec_t exploitability = 0.0;  // certified duality gap at (x, y)
    size_t iterations = 0;
    bool converged = false;
};

/// Zero-sum regularized saddle point
///   max_x min_y x^T M y - Omega1(x) + Omega2(y)
/// via composite mirror-prox (extragradient with an entropic mirror map;
/// entropy-type regularizers enter through their closed-form prox, the rest
/// through gradients). Stops when the independently measured exploitability
/// drops below eps; reports converged = false at the iteration cap or on
/// stalling, with the best iterate found.
SaddleResult solve_zs_regularized(const Matrix& M, const Regularizer& reg1,
                                  const Regularizer& reg2, prec_t eps,
                                  size_t max_iterations = 1000000);

/// Duality gap of (x, y) for the objective above: best response improvement of
/// both players, always >= 0 up to rounding.
prec_t zs_exploitability(const Matrix& M, const Regularizer& reg1, const Regularizer& reg2,
                         const numvec& x, const numvec& y);

/// All Nash equilibria of a small bimatrix game (A, B) found by support
/// enumeration; every returned profile passes a best-response check at `tol`.
/// Intended for |A|, |B| up to roughly 5x5.
std::vector<std::pair<numvec, numvec>> support_enumeration_ne(const Matrix& A, const Matrix& B,
                                                              prec_t tol = 1e-9);

/// Euclidean projection onto the probability simplex.
numvec project_simplex(const numvec& v);

} // namespace rmg::stage

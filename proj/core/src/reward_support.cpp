// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/reward_support.hpp"

#include <stdexcept>

namespace rmg::support {

namespace {

/// w(x) for the separable kernels; the support term is tau * sum_a pi(a)*w(pi(a)).
prec_t kernel_w(KernelKind kind, prec_t x, const prec_t* ref) {
    switch (kind) {
    case KernelKind::shannon: return std::log(x);
    case KernelKind::kl_reference: return std::log(x / *ref);
    case KernelKind::tsallis: return (x - 1.0) / 2.0;
    case KernelKind::renyi: break;
    }
    throw std::logic_error("kernel_w: renyi is not separable");
}

/// Vector u with ||u||_{p*} = 1 and <u, x> = ||x||_p (duality map); ties are
/// broken toward the lowest index so results are deterministic.
numvec norm_duality_map(const numvec& x, prec_t p) {
    const size_t n = x.size();
    numvec u(n, 0.0);
    if (std::isinf(p)) {
        // ||x||_inf: point mass (in |.|_1) on the largest-magnitude entry.
        size_t best = 0;
        for (size_t i = 1; i < n; i++)
            if (std::abs(x[i]) > std::abs(x[best])) best = i;
        u[best] = x[best] >= 0 ? 1.0 : -1.0;
        return u;
    }
    if (p == 1.0) {
        for (size_t i = 0; i < n; i++) u[i] = x[i] >= 0 ? 1.0 : -1.0;
        return u;
    }
    const prec_t nx = lp_norm(x, p);
    if (nx <= 0) {
        u[0] = 1.0;
        return u;
    }
    for (size_t i = 0; i < n; i++) {
        const prec_t t = std::pow(std::abs(x[i]) / nx, p - 1.0);
        u[i] = x[i] >= 0 ? t : -t;
    }
    return u;
}

} // namespace

prec_t support_kernel(KernelKind kind, prec_t tau, const numvec& pi, const numvec* reference,
                      prec_t order) {
    if (kind == KernelKind::renyi) {
        prec_t s = 0.0;
        for (prec_t x : pi) s += std::pow(std::max(x, 0.0), order);
        return tau / (order - 1.0) * std::log(s);
    }
    if (kind == KernelKind::kl_reference && reference == nullptr)
        throw std::invalid_argument("support_kernel: kl_reference needs a reference");
    prec_t s = 0.0;
    for (size_t a = 0; a < pi.size(); a++) {
        if (pi[a] <= 0) continue;  // x*w(x) extends continuously to 0 at x = 0
        const prec_t ref = reference != nullptr ? (*reference)[a] : 0.0;
        s += pi[a] * kernel_w(kind, pi[a], reference != nullptr ? &ref : nullptr);
    }
    return tau * s;
}

prec_t own_regularizer(const RewardUncertainty& u, const numvec& mu_own) {
    switch (u.family) {
    case RewardUncertainty::Family::singleton: return 0.0;
    case RewardUncertainty::Family::opnorm: return u.alpha * lp_norm(mu_own, u.p);
    case RewardUncertainty::Family::kernel:
        return support_kernel(u.kernel, u.tau, mu_own,
                              u.kernel == KernelKind::kl_reference ? &u.reference : nullptr,
                              u.order);
    case RewardUncertainty::Family::interval: break;
    }
    throw std::invalid_argument(
        "own_regularizer: interval sets do not decompose over the own marginal");
}

prec_t support_value(const RewardUncertainty& u, const RewardUncertainty* opp,
                     const numvec& mu_own, const numvec& mu_opp,
                     const std::vector<size_t>* joint_map) {
    prec_t base = 0.0;
    switch (u.family) {
    case RewardUncertainty::Family::singleton: base = 0.0; break;
    case RewardUncertainty::Family::interval: {
        if (u.lower.size() != mu_own.size() * mu_opp.size())
            throw std::invalid_argument("support_value: interval bounds have wrong dimension");
        // sup_{lower <= R <= upper} <R, -mu_own mu_opp^T>, entrywise.
        size_t k = 0;
        for (prec_t xo : mu_own)
            for (prec_t yo : mu_opp) {
                const prec_t c = -xo * yo;
                const size_t j = joint_map ? (*joint_map)[k] : k;
                base += std::max(u.lower[j] * c, u.upper[j] * c);
                k++;
            }
        break;
    }
    case RewardUncertainty::Family::opnorm:
        base = u.alpha * lp_norm(mu_own, u.p) * lp_norm(mu_opp, u.q);
        break;
    case RewardUncertainty::Family::kernel:
        base = own_regularizer(u, mu_own);
        break;
    }
    if (u.aligned_offset) {
        if (opp == nullptr)
            throw std::invalid_argument(
                "support_value: aligned_offset needs the opponent descriptor");
        base -= own_regularizer(*opp, mu_opp);
    }
    return base;
}

numvec worst_case_perturbation(const RewardUncertainty& u, const numvec& mu_own,
                               const numvec& mu_opp,
                               const std::vector<size_t>* joint_map) {
    const size_t njoint = mu_own.size() * mu_opp.size();
    numvec pert(njoint, 0.0);
    const auto at = [&](size_t k) -> prec_t& { return pert[joint_map ? (*joint_map)[k] : k]; };
    switch (u.family) {
    case RewardUncertainty::Family::singleton: return pert;
    case RewardUncertainty::Family::interval: {
        // Entrywise argmax of max(lower*c, upper*c) with c = -mu mu'.
        size_t k = 0;
        for (prec_t xo : mu_own)
            for (prec_t yo : mu_opp) {
                const prec_t c = -xo * yo;
                const size_t j = joint_map ? (*joint_map)[k] : k;
                pert[j] = u.lower[j] * c >= u.upper[j] * c ? u.lower[j] : u.upper[j];
                k++;
            }
        return pert;
    }
    case RewardUncertainty::Family::opnorm: {
        // Rank-one maximizer alpha * u0 v0^T with u0 dual to -mu_own in p and
        // v0 dual to mu_opp in q; it lies on the boundary of the
        // ||.||_{q->p*} <= alpha ball and attains the support value.
        numvec neg_own(mu_own.size());
        for (size_t i = 0; i < mu_own.size(); i++) neg_own[i] = -mu_own[i];
        const numvec u0 = norm_duality_map(neg_own, u.p);
        const numvec v0 = norm_duality_map(mu_opp, u.q);
        size_t k = 0;
        for (size_t i = 0; i < mu_own.size(); i++)
            for (size_t j = 0; j < mu_opp.size(); j++) at(k++) = u.alpha * u0[i] * v0[j];
        return pert;
    }
    case RewardUncertainty::Family::kernel: {
        if (u.kernel == KernelKind::renyi)
            throw std::invalid_argument(
                "worst_case_perturbation: renyi kernels have no per-action realization");
        // Rows indexed by the own action: pert(a, b) = -tau * w(mu_own(a)),
        // so that E_mu[pert] = -support value exactly.
        size_t k = 0;
        for (size_t i = 0; i < mu_own.size(); i++) {
            prec_t w;
            if (mu_own[i] <= 0) {
                // The action is never played; any finite entry preserves the
                // attainment identity. Use 0 for determinism.
                w = 0.0;
            } else {
                const prec_t ref =
                    u.kernel == KernelKind::kl_reference ? u.reference[i] : 0.0;
                w = kernel_w(u.kernel, mu_own[i],
                             u.kernel == KernelKind::kl_reference ? &ref : nullptr);
            }
            for (size_t j = 0; j < mu_opp.size(); j++) at(k++) = -u.tau * w;
        }
        return pert;
    }
    }
    throw std::logic_error("worst_case_perturbation: unhandled family");
}

bool separable_in_own_marginal(const RewardUncertainty& u) {
    switch (u.family) {
    case RewardUncertainty::Family::singleton: return true;
    case RewardUncertainty::Family::opnorm: return u.q == 1.0;
    case RewardUncertainty::Family::kernel: return u.kernel != KernelKind::renyi;
    case RewardUncertainty::Family::interval: return false;
    }
    return false;
}

stage::Regularizer regularizer_from_uncertainty(const RewardUncertainty& u,
                                                prec_t opp_scale) {
    stage::Regularizer reg;
    switch (u.family) {
    case RewardUncertainty::Family::singleton:
    case RewardUncertainty::Family::interval:
        break;
    case RewardUncertainty::Family::opnorm:
        reg.kind = stage::Regularizer::Kind::pnorm;
        reg.coeff = u.alpha * opp_scale;
        reg.p = u.p;
        break;
    case RewardUncertainty::Family::kernel:
        switch (u.kernel) {
        case KernelKind::shannon: reg.kind = stage::Regularizer::Kind::shannon; break;
        case KernelKind::kl_reference: reg.kind = stage::Regularizer::Kind::kl_reference; break;
        case KernelKind::tsallis: reg.kind = stage::Regularizer::Kind::tsallis; break;
        case KernelKind::renyi: reg.kind = stage::Regularizer::Kind::renyi; break;
        }
        reg.coeff = u.tau;
        reg.reference = u.reference;
        reg.order = u.order;
        break;
    }
    return reg;
}

RewardUncertainty uncertainty_from_regularizer(const stage::Regularizer& reg) {
    RewardUncertainty u;
    switch (reg.kind) {
    case stage::Regularizer::Kind::none:
        u.family = RewardUncertainty::Family::singleton;
        break;
    case stage::Regularizer::Kind::pnorm:
        u.family = RewardUncertainty::Family::opnorm;
        u.alpha = reg.coeff;
        u.p = reg.p;
        u.q = 1.0;
        break;
    case stage::Regularizer::Kind::shannon:
    case stage::Regularizer::Kind::kl_reference:
    case stage::Regularizer::Kind::tsallis:
    case stage::Regularizer::Kind::renyi:
        u.family = RewardUncertainty::Family::kernel;
        switch (reg.kind) {
        case stage::Regularizer::Kind::shannon: u.kernel = KernelKind::shannon; break;
        case stage::Regularizer::Kind::kl_reference: u.kernel = KernelKind::kl_reference; break;
        case stage::Regularizer::Kind::tsallis: u.kernel = KernelKind::tsallis; break;
        default: u.kernel = KernelKind::renyi; break;
        }
        u.tau = reg.coeff;
        u.reference = reg.reference;
        u.order = reg.order;
        break;
    }
    return u;
}

} // namespace rmg::support

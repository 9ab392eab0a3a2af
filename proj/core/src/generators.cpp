// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace rmg::gen {

namespace {

RewardUncertainty make_reward_set(RNG& rng, const InstanceConfig& cfg, size_t njoint,
                                  size_t own_actions) {
    RewardUncertainty u;
    if (cfg.reward_family == "singleton") {
        u.family = RewardUncertainty::Family::singleton;
    } else if (cfg.reward_family == "interval") {
        u.family = RewardUncertainty::Family::interval;
        u.lower.resize(njoint);
        u.upper.resize(njoint);
        for (size_t k = 0; k < njoint; k++) {
            u.lower[k] = -cfg.interval_width * rng.u01();
            u.upper[k] = cfg.interval_width * rng.u01();
        }
    } else if (cfg.reward_family == "opnorm") {
        u.family = RewardUncertainty::Family::opnorm;
        u.alpha = cfg.alpha;
        u.p = cfg.opnorm_p;
        u.q = cfg.aligned_offset ? 1.0 : cfg.opnorm_q;
    } else if (cfg.reward_family == "kernel") {
        u.family = RewardUncertainty::Family::kernel;
        u.kernel = cfg.kernel;
        u.tau = cfg.tau;
        u.order = cfg.renyi_order;
        if (cfg.kernel == KernelKind::kl_reference) {
            u.reference = random_distribution(rng, own_actions);
            // keep the reference strictly positive
            prec_t sum = 0.0;
            for (auto& r : u.reference) {
                r += 1e-3;
                sum += r;
            }
            for (auto& r : u.reference) r /= sum;
        }
    } else {
        throw std::invalid_argument("unknown reward uncertainty family: " + cfg.reward_family);
    }
    u.aligned_offset = cfg.aligned_offset;
    return u;
}

TransitionUncertainty make_transition_set(RNG& rng, const InstanceConfig& cfg,
                                          size_t num_states) {
    TransitionUncertainty u;
    u.rect = cfg.rectangularity;
    u.radius = {cfg.radius};
    if (cfg.transition_family == "tv") {
        u.family = TransitionUncertainty::Family::tv;
    } else if (cfg.transition_family == "kl") {
        u.family = TransitionUncertainty::Family::kl;
    } else if (cfg.transition_family == "chi2") {
        u.family = TransitionUncertainty::Family::chi2;
    } else if (cfg.transition_family == "wasserstein") {
        u.family = TransitionUncertainty::Family::wasserstein;
        // ground metric from a random embedding on the line, with a minimum
        // spacing so distinct states never collapse
        numvec z(num_states);
        for (size_t i = 0; i < num_states; i++)
            z[i] = static_cast<prec_t>(i) + 0.5 * rng.u01();
        u.metric.assign(num_states * num_states, 0.0);
        for (size_t i = 0; i < num_states; i++)
            for (size_t j = 0; j < num_states; j++)
                u.metric[i * num_states + j] = std::abs(z[i] - z[j]);
    } else if (cfg.transition_family == "lp_ball") {
        u.family = TransitionUncertainty::Family::lp_ball;
        u.rect = TransitionUncertainty::Rect::s;
        u.p = cfg.lp_p;
    } else {
        throw std::invalid_argument("unknown transition uncertainty family: " +
                                    cfg.transition_family);
    }
    return u;
}

} // namespace

RMGInstance random_instance(RNG& rng, const InstanceConfig& cfg) {
    if (cfg.num_players < 2) throw std::invalid_argument("at least two players are required");
    if (static_cast<int>(cfg.num_actions.size()) != cfg.num_players)
        throw std::invalid_argument("num_actions must list one entry per player");
    if (cfg.zero_sum && cfg.num_players != 2)
        throw std::invalid_argument("zero-sum generation requires exactly two players");

    RMGInstance g;
    g.num_players = cfg.num_players;
    g.num_states = cfg.num_states;
    g.num_actions = cfg.num_actions;
    g.horizon = cfg.horizon;
    g.initial_state = cfg.initial_state;
    g.zero_sum = cfg.zero_sum;

    const size_t njoint = g.num_joint_actions();
    const size_t S = static_cast<size_t>(cfg.num_states);
    const size_t H = static_cast<size_t>(cfg.horizon);

    g.rewards.assign(cfg.num_players, {});
    for (int i = 0; i < cfg.num_players; i++) {
        g.rewards[i].assign(H, {});
        for (size_t h = 0; h < H; h++) {
            g.rewards[i][h].assign(S, numvec(njoint, 0.0));
            for (size_t s = 0; s < S; s++)
                for (size_t k = 0; k < njoint; k++)
                    g.rewards[i][h][s][k] =
                        cfg.zero_sum && i == 1
                            ? -g.rewards[0][h][s][k]
                            : cfg.reward_scale * rng.uniform(-1.0, 1.0);
        }
    }

    g.transitions.assign(H >= 1 ? H - 1 : 0, {});
    for (size_t h = 0; h + 1 < H; h++) {
        g.transitions[h].assign(S, {});
        for (size_t s = 0; s < S; s++) {
            g.transitions[h][s].assign(njoint, {});
            for (size_t k = 0; k < njoint; k++)
                g.transitions[h][s][k] = random_distribution(rng, S);
        }
    }

    if (cfg.reward_family != "none") {
        for (int i = 0; i < cfg.num_players; i++)
            for (size_t h = 0; h < H; h++)
                for (size_t s = 0; s < S; s++)
                    g.reward_sets[{i, static_cast<int>(h), static_cast<int>(s)}] =
                        make_reward_set(rng, cfg, njoint,
                                        static_cast<size_t>(cfg.num_actions[i]));
    }
    if (cfg.transition_family != "none") {
        for (size_t h = 0; h + 1 < H; h++)
            for (size_t s = 0; s < S; s++)
                g.transition_sets[{static_cast<int>(h), static_cast<int>(s)}] =
                    make_transition_set(rng, cfg, S);
    }

    validate_instance(g);
    return g;
}

Matrix random_matrix(RNG& rng, size_t rows, size_t cols, prec_t lo, prec_t hi) {
    Matrix m(rows, cols);
    for (auto& e : m.data) e = rng.uniform(lo, hi);
    return m;
}

RMGInstance bimatrix_instance(const Matrix& A, const Matrix& B) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::invalid_argument("bimatrix payoff shapes disagree");
    RMGInstance g;
    g.num_players = 2;
    g.num_states = 1;
    g.num_actions = {static_cast<int>(A.rows), static_cast<int>(A.cols)};
    g.horizon = 1;
    g.initial_state = 0;
    prec_t offsum = 0.0;
    for (size_t k = 0; k < A.data.size(); k++)
        offsum = std::max(offsum, std::abs(A.data[k] + B.data[k]));
    g.zero_sum = offsum <= 1e-15;
    g.rewards = {{{A.data}}, {{B.data}}};
    validate_instance(g);
    return g;
}

RMGInstance matching_pennies() {
    Matrix a(2, 2, {1.0, -1.0, -1.0, 1.0});
    Matrix b(2, 2, {-1.0, 1.0, 1.0, -1.0});
    return bimatrix_instance(a, b);
}

RMGInstance prisoners_dilemma() {
    Matrix a(2, 2, {-1.0, -3.0, 0.0, -2.0});
    Matrix b(2, 2, {-1.0, 0.0, -3.0, -2.0});
    return bimatrix_instance(a, b);
}

RMGInstance battle_of_sexes() {
    Matrix a(2, 2, {2.0, 0.0, 0.0, 1.0});
    Matrix b(2, 2, {1.0, 0.0, 0.0, 2.0});
    return bimatrix_instance(a, b);
}

RMGInstance named_instance(const std::string& name) {
    if (name == "matching_pennies") return matching_pennies();
    if (name == "prisoners_dilemma") return prisoners_dilemma();
    if (name == "battle_of_sexes") return battle_of_sexes();
    throw std::invalid_argument("unknown instance name: " + name);
}

} // namespace rmg::gen

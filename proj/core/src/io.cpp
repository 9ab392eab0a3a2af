// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
#include "rmg/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rmg/jsonval.hpp"

namespace rmg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

prec_t parse_exponent(const json& node, const std::string& what) {
    if (node.is_string()) {
        const std::string s = node.get<std::string>();
        if (s == "inf" || s == "Inf" || s == "infinity") return INF;
        fail(what + ": expected a number or \"inf\"");
    }
    return node.get<prec_t>();
}

Json exponent_json(prec_t p) {
    if (std::isinf(p)) return Json("inf");
    return Json(p);
}

numvec parse_numvec(const json& node, const std::string& what) {
    if (!node.is_array()) fail(what + ": expected an array of numbers");
    numvec out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number()) fail(what + ": expected an array of numbers");
        out.push_back(v.get<prec_t>());
    }
    return out;
}

RewardUncertainty parse_reward_set(const json& node, const std::string& ctx) {
    RewardUncertainty u;
    const std::string family = node.at("family").get<std::string>();
    if (family == "singleton") {
        u.family = RewardUncertainty::Family::singleton;
    } else if (family == "interval") {
        u.family = RewardUncertainty::Family::interval;
        u.lower = parse_numvec(node.at("lower"), ctx + ".lower");
        u.upper = parse_numvec(node.at("upper"), ctx + ".upper");
    } else if (family == "opnorm") {
        u.family = RewardUncertainty::Family::opnorm;
        u.alpha = node.at("alpha").get<prec_t>();
        u.p = parse_exponent(node.at("p"), ctx + ".p");
        u.q = parse_exponent(node.at("q"), ctx + ".q");
    } else if (family == "kernel") {
        u.family = RewardUncertainty::Family::kernel;
        const std::string kind = node.at("kind").get<std::string>();
        if (kind == "shannon") u.kernel = KernelKind::shannon;
        else if (kind == "kl_reference") u.kernel = KernelKind::kl_reference;
        else if (kind == "tsallis") u.kernel = KernelKind::tsallis;
        else if (kind == "renyi") u.kernel = KernelKind::renyi;
        else fail(ctx + ": unknown kernel kind '" + kind + "'");
        u.tau = node.at("tau").get<prec_t>();
        if (u.kernel == KernelKind::kl_reference)
            u.reference = parse_numvec(node.at("reference"), ctx + ".reference");
        if (u.kernel == KernelKind::renyi) u.order = node.at("order").get<prec_t>();
    } else {
        fail(ctx + ": unknown reward uncertainty family '" + family + "'");
    }
    if (node.contains("aligned_offset")) u.aligned_offset = node.at("aligned_offset").get<bool>();
    return u;
}

TransitionUncertainty parse_transition_set(const json& node, int num_states,
                                           const std::string& ctx) {
    TransitionUncertainty u;
    const std::string rect = node.value("rectangularity", std::string("sa"));
    if (rect == "sa") u.rect = TransitionUncertainty::Rect::sa;
    else if (rect == "s") u.rect = TransitionUncertainty::Rect::s;
    else fail(ctx + ": unknown rectangularity '" + rect + "'");

    const std::string family = node.at("family").get<std::string>();
    if (family == "tv") u.family = TransitionUncertainty::Family::tv;
    else if (family == "kl") u.family = TransitionUncertainty::Family::kl;
    else if (family == "chi2") u.family = TransitionUncertainty::Family::chi2;
    else if (family == "wasserstein") u.family = TransitionUncertainty::Family::wasserstein;
    else if (family == "lp_ball") u.family = TransitionUncertainty::Family::lp_ball;
    else fail(ctx + ": unknown transition uncertainty family '" + family + "'");

    const json& radius = node.at("radius");
    if (radius.is_number()) u.radius = {radius.get<prec_t>()};
    else u.radius = parse_numvec(radius, ctx + ".radius");

    if (u.family == TransitionUncertainty::Family::wasserstein) {
        const json& metric = node.at("metric");
        if (!metric.is_array() || static_cast<int>(metric.size()) != num_states)
            fail(ctx + ".metric: expected num_states rows");
        u.metric.reserve(static_cast<size_t>(num_states) * num_states);
        for (const auto& row : metric) {
            numvec r = parse_numvec(row, ctx + ".metric row");
            if (static_cast<int>(r.size()) != num_states)
                fail(ctx + ".metric: expected num_states columns");
            u.metric.insert(u.metric.end(), r.begin(), r.end());
        }
    }
    if (node.contains("p")) u.p = parse_exponent(node.at("p"), ctx + ".p");
    return u;
}

} // namespace

RMGInstance parse_instance(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(std::string("instance JSON parse error: ") + e.what());
    }
    RMGInstance inst;
    try {
        const std::string schema = doc.at("schema").get<std::string>();
        if (schema != "rmg-v1") fail("unsupported instance schema '" + schema + "'");
        inst.num_players = doc.at("num_players").get<int>();
        inst.num_states = doc.at("num_states").get<int>();
        inst.num_actions = doc.at("num_actions").get<std::vector<int>>();
        inst.horizon = doc.at("horizon").get<int>();
        inst.initial_state = doc.value("initial_state", 0);
        inst.zero_sum = doc.value("zero_sum", false);

        const json& rewards = doc.at("rewards");
        inst.rewards.resize(rewards.size());
        for (size_t i = 0; i < rewards.size(); i++) {
            inst.rewards[i].resize(rewards[i].size());
            for (size_t h = 0; h < rewards[i].size(); h++) {
                inst.rewards[i][h].resize(rewards[i][h].size());
                for (size_t s = 0; s < rewards[i][h].size(); s++)
                    inst.rewards[i][h][s] = parse_numvec(rewards[i][h][s], "rewards entry");
            }
        }
        if (doc.contains("transitions")) {
            const json& transitions = doc.at("transitions");
            inst.transitions.resize(transitions.size());
            for (size_t h = 0; h < transitions.size(); h++) {
                inst.transitions[h].resize(transitions[h].size());
                for (size_t s = 0; s < transitions[h].size(); s++) {
                    inst.transitions[h][s].resize(transitions[h][s].size());
                    for (size_t k = 0; k < transitions[h][s].size(); k++)
                        inst.transitions[h][s][k] =
                            parse_numvec(transitions[h][s][k], "transitions entry");
                }
            }
        }
        if (doc.contains("reward_uncertainty")) {
            for (const auto& node : doc.at("reward_uncertainty")) {
                const int i = node.at("player").get<int>();
                const int h = node.at("step").get<int>();
                const int s = node.at("state").get<int>();
                std::ostringstream ctx;
                ctx << "reward_uncertainty(player " << i << ", step " << h << ", state " << s
                    << ")";
                if (inst.reward_sets.count({i, h, s}))
                    fail(ctx.str() + ": duplicate descriptor");
                inst.reward_sets.emplace(std::make_tuple(i, h, s),
                                         parse_reward_set(node, ctx.str()));
            }
        }
        if (doc.contains("transition_uncertainty")) {
            for (const auto& node : doc.at("transition_uncertainty")) {
                const int h = node.at("step").get<int>();
                const int s = node.at("state").get<int>();
                std::ostringstream ctx;
                ctx << "transition_uncertainty(step " << h << ", state " << s << ")";
                if (inst.transition_sets.count({h, s}))
                    fail(ctx.str() + ": duplicate descriptor");
                inst.transition_sets.emplace(std::make_pair(h, s),
                                             parse_transition_set(node, inst.num_states,
                                                                  ctx.str()));
            }
        }
    } catch (const json::exception& e) {
        fail(std::string("instance JSON structure error: ") + e.what());
    }
    validate_instance(inst);
    return inst;
}

std::string serialize_instance(const RMGInstance& inst) {
    Json doc = Json::object();
    doc["schema"] = Json("rmg-v1");
    doc["num_players"] = Json(inst.num_players);
    doc["num_states"] = Json(inst.num_states);
    Json actions = Json::array();
    for (int a : inst.num_actions) actions.push_back(Json(a));
    doc["num_actions"] = std::move(actions);
    doc["horizon"] = Json(inst.horizon);
    doc["initial_state"] = Json(inst.initial_state);
    doc["zero_sum"] = Json(inst.zero_sum);

    Json rewards = Json::array();
    for (const auto& per_player : inst.rewards) {
        Json jh = Json::array();
        for (const auto& per_step : per_player) {
            Json js = Json::array();
            for (const auto& per_state : per_step) js.push_back(Json(per_state));
            jh.push_back(std::move(js));
        }
        rewards.push_back(std::move(jh));
    }
    doc["rewards"] = std::move(rewards);

    if (!inst.transitions.empty()) {
        Json transitions = Json::array();
        for (const auto& per_step : inst.transitions) {
            Json js = Json::array();
            for (const auto& per_state : per_step) {
                Json jk = Json::array();
                for (const auto& dist : per_state) jk.push_back(Json(dist));
                js.push_back(std::move(jk));
            }
            transitions.push_back(std::move(js));
        }
        doc["transitions"] = std::move(transitions);
    }

    if (!inst.reward_sets.empty()) {
        Json sets = Json::array();
        for (const auto& [key, u] : inst.reward_sets) {
            auto [i, h, s] = key;
            Json node = Json::object();
            node["player"] = Json(i);
            node["step"] = Json(h);
            node["state"] = Json(s);
            switch (u.family) {
            case RewardUncertainty::Family::singleton:
                node["family"] = Json("singleton");
                break;
            case RewardUncertainty::Family::interval:
                node["family"] = Json("interval");
                node["lower"] = Json(u.lower);
                node["upper"] = Json(u.upper);
                break;
            case RewardUncertainty::Family::opnorm:
                node["family"] = Json("opnorm");
                node["alpha"] = Json(u.alpha);
                node["p"] = exponent_json(u.p);
                node["q"] = exponent_json(u.q);
                break;
            case RewardUncertainty::Family::kernel:
                node["family"] = Json("kernel");
                switch (u.kernel) {
                case KernelKind::shannon: node["kind"] = Json("shannon"); break;
                case KernelKind::kl_reference:
                    node["kind"] = Json("kl_reference");
                    node["reference"] = Json(u.reference);
                    break;
                case KernelKind::tsallis: node["kind"] = Json("tsallis"); break;
                case KernelKind::renyi:
                    node["kind"] = Json("renyi");
                    node["order"] = Json(u.order);
                    break;
                }
                node["tau"] = Json(u.tau);
                break;
            }
            if (u.aligned_offset) node["aligned_offset"] = Json(true);
            sets.push_back(std::move(node));
        }
        doc["reward_uncertainty"] = std::move(sets);
    }

    if (!inst.transition_sets.empty()) {
        Json sets = Json::array();
        for (const auto& [key, u] : inst.transition_sets) {
            auto [h, s] = key;
            Json node = Json::object();
            node["step"] = Json(h);
            node["state"] = Json(s);
            node["rectangularity"] =
                Json(u.rect == TransitionUncertainty::Rect::sa ? "sa" : "s");
            switch (u.family) {
            case TransitionUncertainty::Family::tv: node["family"] = Json("tv"); break;
            case TransitionUncertainty::Family::kl: node["family"] = Json("kl"); break;
            case TransitionUncertainty::Family::chi2: node["family"] = Json("chi2"); break;
            case TransitionUncertainty::Family::wasserstein:
                node["family"] = Json("wasserstein");
                break;
            case TransitionUncertainty::Family::lp_ball:
                node["family"] = Json("lp_ball");
                break;
            }
            if (u.radius.size() == 1) {
                node["radius"] = Json(u.radius[0]);
            } else {
                node["radius"] = Json(u.radius);
            }
            if (!u.metric.empty()) {
                Json metric = Json::array();
                const size_t S = static_cast<size_t>(inst.num_states);
                for (size_t r = 0; r < S; r++) {
                    numvec row(u.metric.begin() + r * S, u.metric.begin() + (r + 1) * S);
                    metric.push_back(Json(row));
                }
                node["metric"] = std::move(metric);
            }
            if (u.family == TransitionUncertainty::Family::lp_ball)
                node["p"] = exponent_json(u.p);
            sets.push_back(std::move(node));
        }
        doc["transition_uncertainty"] = std::move(sets);
    }
    return doc.dump(2);
}

Policy parse_policy(const std::string& json_text, const RMGInstance& inst) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(std::string("policy JSON parse error: ") + e.what());
    }
    Policy pol;
    try {
        const std::string schema = doc.at("schema").get<std::string>();
        if (schema != "rmg-policy-v1") fail("unsupported policy schema '" + schema + "'");
        const json& players = doc.at("policy");
        pol.resize(players.size());
        for (size_t i = 0; i < players.size(); i++) {
            pol[i].resize(players[i].size());
            for (size_t h = 0; h < players[i].size(); h++) {
                pol[i][h].resize(players[i][h].size());
                for (size_t s = 0; s < players[i][h].size(); s++)
                    pol[i][h][s] = parse_numvec(players[i][h][s], "policy entry");
            }
        }
    } catch (const json::exception& e) {
        fail(std::string("policy JSON structure error: ") + e.what());
    }
    validate_policy(inst, pol);
    return pol;
}

std::string serialize_policy(const Policy& policy) {
    Json doc = Json::object();
    doc["schema"] = Json("rmg-policy-v1");
    doc["num_players"] = Json(policy.size());
    Json players = Json::array();
    for (const auto& per_player : policy) {
        Json jh = Json::array();
        for (const auto& per_step : per_player) {
            Json js = Json::array();
            for (const auto& dist : per_step) js.push_back(Json(dist));
            jh.push_back(std::move(js));
        }
        players.push_back(std::move(jh));
    }
    doc["policy"] = std::move(players);
    return doc.dump(2);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing file: " + path);
}

RMGInstance load_instance(const std::string& path) { return parse_instance(read_text_file(path)); }
void save_instance(const std::string& path, const RMGInstance& inst) {
    write_text_file(path, serialize_instance(inst));
}
Policy load_policy(const std::string& path, const RMGInstance& inst) {
    return parse_policy(read_text_file(path), inst);
}
void save_policy(const std::string& path, const Policy& policy) {
    write_text_file(path, serialize_policy(policy));
}

} // namespace rmg

// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
//
// rmg: command line front end for the robust Markov game toolkit.
//
// Subcommands: solve, eval, gap, reduce, check_equivalence, gen, oracle.
// Reports are written as JSON with stable field order and full-precision
// numbers, so identical inputs (including --seed) produce byte-identical
// output regardless of --jobs. Progress goes to stderr only.
//
// Exit codes: 0 success/certified, 1 usage or input error, 2 the computation
// ran but did not meet its tolerance (a report is still written).

#include <atomic>
#include <exception>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmg/game.hpp"
#include "rmg/generators.hpp"
#include "rmg/io.hpp"
#include "rmg/jsonval.hpp"
#include "rmg/oracles.hpp"
#include "rmg/planner.hpp"
#include "rmg/reductions.hpp"
#include "rmg/transition_duals.hpp"
#include "rmg/types.hpp"

namespace {

using namespace rmg;

constexpr int EXIT_OK = 0;
constexpr int EXIT_INPUT = 1;
constexpr int EXIT_TOLERANCE = 2;

/// Run fn(0..n-1), striped across up to `jobs` threads. Each index writes to
/// its own output slot, so the schedule cannot affect results.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
    const size_t workers =
        std::min<size_t>(std::max(jobs, 1), n == 0 ? 1 : n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; i++) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; w++) {
        pool.emplace_back([&, w]() {
            try {
                for (size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed) std::rethrow_exception(first_error);
}

void write_report(const std::string& path, const Json& report) {
    if (!path.empty()) write_text_file(path, report.dump());
}

// Failures while loading an input file are usage errors (exit 1), not
// tolerance failures, so rethrow the library's I/O errors accordingly.
RMGInstance load_instance_input(const std::string& path) {
    try {
        return load_instance(path);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(e.what());
    }
}

Policy load_policy_input(const std::string& path, const RMGInstance& inst) {
    try {
        return load_policy(path, inst);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(e.what());
    }
}

std::string read_input_file(const std::string& path) {
    try {
        return read_text_file(path);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(e.what());
    }
}

Json gap_to_json(const plan::GapResult& gap) {
    Json j = Json::object();
    j["per_player"] = Json(gap.per_player);
    j["max"] = Json(gap.max_gap);
    return j;
}

Json table_to_json(const std::vector<numvec>& table) {
    Json j = Json::array();
    for (const auto& row : table) j.push_back(Json(row));
    return j;
}

Matrix parse_json_matrix(const nlohmann::json& rows, const std::string& name) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw std::invalid_argument("field '" + name + "' must be a nonempty array of rows");
    Matrix m(rows.size(), rows[0].size());
    for (size_t r = 0; r < m.rows; r++) {
        if (rows[r].size() != m.cols)
            throw std::invalid_argument("field '" + name + "' has ragged rows");
        for (size_t c = 0; c < m.cols; c++) m(r, c) = rows[r][c].get<double>();
    }
    return m;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int run_solve(const std::string& game_path, const std::string& method, prec_t eps,
              const std::string& out, const std::string& policy_out) {
    const RMGInstance inst = load_instance_input(game_path);

    plan::PlanResult result;
    std::string used;
    if (method == "zero_sum") {
        result = plan::solve_tpzs_rmg(inst, eps);
        used = "zero_sum";
    } else if (method == "general_sum") {
        result = plan::solve_small_general_sum_rmg(inst, eps);
        used = "general_sum";
    } else {
        try {
            result = plan::solve_tpzs_rmg(inst, eps);
            used = "zero_sum";
        } catch (const std::invalid_argument& zs_err) {
            try {
                result = plan::solve_small_general_sum_rmg(inst, eps);
                used = "general_sum";
            } catch (const std::invalid_argument& gs_err) {
                throw std::invalid_argument(
                    std::string("no planner accepts this instance; zero-sum planner: ") +
                    zs_err.what() + "; general-sum planner: " + gs_err.what());
            }
        }
    }

    Json report = Json::object();
    report["schema"] = "rmg-report-v1";
    report["command"] = "solve";
    report["method"] = used;
    report["eps"] = Json(eps);
    report["certified"] = Json(result.certified);
    report["initial_values"] = Json(result.initial);
    report["gap"] = gap_to_json(result.gap);
    report["values"] = table_to_json(result.values);
    write_report(out, report);
    if (!policy_out.empty()) save_policy(policy_out, result.policy);

    std::cerr << "solve: method=" << used << " value=" << result.initial[0]
              << " max_gap=" << result.gap.max_gap
              << " certified=" << (result.certified ? "yes" : "no") << "\n";
    return result.certified ? EXIT_OK : EXIT_TOLERANCE;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int run_eval(const std::string& game_path, const std::string& policy_path,
             const std::string& out) {
    const RMGInstance inst = load_instance_input(game_path);
    const Policy policy = load_policy_input(policy_path, inst);
    const plan::EvalResult eval = plan::robust_policy_eval(inst, policy);

    Json report = Json::object();
    report["schema"] = "rmg-report-v1";
    report["command"] = "eval";
    report["initial_values"] = Json(eval.initial);
    Json values = Json::array();
    for (const auto& per_player : eval.values) values.push_back(table_to_json(per_player));
    report["values"] = std::move(values);
    write_report(out, report);

    std::cerr << "eval: initial values";
    for (const auto v : eval.initial) std::cerr << " " << v;
    std::cerr << "\n";
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// gap
// ---------------------------------------------------------------------------

int run_gap(const std::string& game_path, const std::string& policy_path, prec_t eps,
            const std::string& out) {
    const RMGInstance inst = load_instance_input(game_path);
    const Policy policy = load_policy_input(policy_path, inst);
    const plan::GapResult gap = plan::rne_gap(inst, policy);
    const bool pass = gap.max_gap <= eps;

    Json report = Json::object();
    report["schema"] = "rmg-report-v1";
    report["command"] = "gap";
    report["eps"] = Json(eps);
    report["certified"] = Json(pass);
    report["gap"] = gap_to_json(gap);
    write_report(out, report);

    std::cerr << "gap: max=" << gap.max_gap << " eps=" << eps
              << " certified=" << (pass ? "yes" : "no") << "\n";
    return pass ? EXIT_OK : EXIT_TOLERANCE;
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

int run_reduce(const std::string& bimatrix_path, const std::string& variant,
               const std::string& out, const std::string& report_path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_input_file(bimatrix_path));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("cannot parse bimatrix file: " + std::string(e.what()));
    }
    if (!doc.contains("A") || !doc.contains("B"))
        throw std::invalid_argument("bimatrix file must contain fields 'A' and 'B'");
    const Matrix A = parse_json_matrix(doc["A"], "A");
    const Matrix B = parse_json_matrix(doc["B"], "B");

    const reduce::Reduction red = variant == "transition"
                                      ? reduce::gensum_to_tpzs_transition(A, B)
                                      : reduce::gensum_to_tpzs_reward(A, B);
    save_instance(out, red.instance);

    Json report = Json::object();
    report["schema"] = "rmg-report-v1";
    report["command"] = "reduce";
    report["variant"] = variant;
    report["shift"] = Json(numvec{red.shift[0], red.shift[1]});
    report["instance_path"] = out;
    write_report(report_path, report);

    std::cerr << "reduce: variant=" << variant << " shifts=" << red.shift[0] << ","
              << red.shift[1] << " -> " << out << "\n";
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// check_equivalence
// ---------------------------------------------------------------------------

int run_check_equivalence(const std::string& game_path, const std::string& policy_path,
                          size_t trials, uint64_t seed, prec_t eps, bool eps_given, int jobs,
                          const std::string& out) {
    const RMGInstance inst = load_instance_input(game_path);
    const prec_t tolerance =
        eps_given ? eps : (plan::has_iterative_duals(inst) ? 1e-6 : 1e-9);

    numvec diffs;
    if (!policy_path.empty()) {
        const Policy policy = load_policy_input(policy_path, inst);
        diffs.push_back(plan::equivalence_check(inst, policy).max_diff);
    } else {
        diffs.assign(trials, 0.0);
        parallel_for(trials, jobs, [&](size_t t) {
            const Policy policy = random_policy(inst, RNG::derive(seed, t));
            diffs[t] = plan::equivalence_check(inst, policy).max_diff;
        });
    }
    const prec_t max_diff = diffs.empty() ? 0.0 : *std::max_element(diffs.begin(), diffs.end());
    const bool pass = max_diff <= tolerance;

    Json report = Json::object();
    report["schema"] = "rmg-report-v1";
    report["command"] = "check_equivalence";
    report["trials"] = static_cast<int64_t>(diffs.size());
    report["seed"] = static_cast<int64_t>(seed);
    report["tolerance"] = Json(tolerance);
    report["max_diff"] = Json(max_diff);
    report["per_trial_diff"] = Json(diffs);
    report["pass"] = Json(pass);
    write_report(out, report);

    std::cerr << "check_equivalence: trials=" << diffs.size() << " max_diff=" << max_diff
              << " tol=" << tolerance << " pass=" << (pass ? "yes" : "no") << "\n";
    return pass ? EXIT_OK : EXIT_TOLERANCE;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

KernelKind parse_kernel(const std::string& name) {
    if (name == "shannon") return KernelKind::shannon;
    if (name == "kl_reference") return KernelKind::kl_reference;
    if (name == "tsallis") return KernelKind::tsallis;
    if (name == "renyi") return KernelKind::renyi;
    throw std::invalid_argument("unknown kernel kind: " + name);
}

int run_gen(const std::string& kind, const std::string& out, uint64_t seed,
            gen::InstanceConfig cfg, const std::string& kernel_name,
            const std::string& rect_name) {
    cfg.kernel = parse_kernel(kernel_name);
    cfg.rectangularity = rect_name == "s" ? TransitionUncertainty::Rect::s
                                          : TransitionUncertainty::Rect::sa;

    RMGInstance inst;
    if (kind == "random") {
        RNG rng(seed);
        inst = gen::random_instance(rng, cfg);
    } else if (kind == "decomposable") {
        cfg.zero_sum = true;
        cfg.aligned_offset = true;
        if (cfg.reward_family == "none") cfg.reward_family = "kernel";
        if (cfg.rectangularity != TransitionUncertainty::Rect::sa)
            throw std::invalid_argument(
                "decomposable instances use (s,a)-rectangular transition sets");
        RNG rng(seed);
        inst = gen::random_instance(rng, cfg);
    } else {
        inst = gen::named_instance(kind);
    }
    save_instance(out, inst);
    std::cerr << "gen: kind=" << kind << " -> " << out << "\n";
    return EXIT_OK;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

struct OracleTrialResult {
    prec_t value_diff = 0.0;
    prec_t attainment = 0.0;
};

int run_oracle(const std::string& family, size_t trials, int states, uint64_t seed, prec_t eps,
               bool eps_given, int jobs, const std::string& out) {
    const prec_t tolerance = eps_given ? eps : (family == "kl" ? 1e-5 : 1e-4);
    if ((family == "tv" || family == "wasserstein") && states > 4)
        throw std::invalid_argument(
            "the vertex-enumeration oracle for this family supports at most 4 states");
    if (states < 2) throw std::invalid_argument("need at least 2 states");

    std::vector<OracleTrialResult> results(trials);
    parallel_for(trials, jobs, [&](size_t t) {
        RNG rng(RNG::derive(seed, t));
        const size_t n = static_cast<size_t>(states);
        const numvec pbar = random_distribution(rng, n);
        numvec v(n);
        for (auto& vi : v) vi = rng.uniform(-1.0, 1.0);
        const prec_t beta = rng.u01() * (family == "tv" ? 1.2 : 2.0);

        duals::DualResult impl;
        prec_t reference = 0.0;
        if (family == "tv") {
            impl = duals::worst_case_tv(v, pbar, beta);
            reference = oracle::tv_worst_lp(v, pbar, beta);
        } else if (family == "kl") {
            impl = duals::worst_case_kl(v, pbar, beta);
            reference = oracle::kl_worst_tilt(v, pbar, beta);
        } else if (family == "chi2") {
            impl = duals::worst_case_chi2(v, pbar, beta);
            reference = oracle::chi2_worst_kkt(v, pbar, beta);
        } else if (family == "wasserstein") {
            numvec z(n);
            for (size_t i = 0; i < n; i++) z[i] = static_cast<prec_t>(i) + 0.5 * rng.u01();
            numvec rho(n * n, 0.0);
            for (size_t i = 0; i < n; i++)
                for (size_t j = 0; j < n; j++) rho[i * n + j] = std::abs(z[i] - z[j]);
            impl = duals::worst_case_wasserstein(v, pbar, beta, rho);
            reference = oracle::wasserstein_worst_lp(v, pbar, beta, rho);
        } else {
            throw std::invalid_argument("unknown oracle family: " + family);
        }
        results[t].value_diff = std::abs(impl.value - reference);
        results[t].attainment = std::abs(-dot(impl.worst, v) - impl.value);
    });

    prec_t max_diff = 0.0, max_attainment = 0.0;
    for (const auto& r : results) {
        max_diff = std::max(max_diff, r.value_diff);
        max_attainment = std::max(max_attainment, r.attainment);
    }
    const bool pass = max_diff <= tolerance;

    Json report = Json::object();
    report["schema"] = "rmg-report-v1";
    report["command"] = "oracle";
    report["family"] = family;
    report["states"] = static_cast<int64_t>(states);
    report["trials"] = static_cast<int64_t>(trials);
    report["seed"] = static_cast<int64_t>(seed);
    report["tolerance"] = Json(tolerance);
    report["max_value_diff"] = Json(max_diff);
    report["max_attainment_diff"] = Json(max_attainment);
    report["pass"] = Json(pass);
    write_report(out, report);

    std::cerr << "oracle: family=" << family << " trials=" << trials
              << " max_value_diff=" << max_diff << " pass=" << (pass ? "yes" : "no") << "\n";
    return pass ? EXIT_OK : EXIT_TOLERANCE;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmg: planning and verification for finite-horizon robust Markov games"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "Plan a robust equilibrium and certify its gap");
    std::string solve_game, solve_method = "auto", solve_out, solve_policy_out;
    prec_t solve_eps = 1e-6;
    solve->add_option("--game", solve_game, "Instance JSON file")->required();
    solve->add_option("--method", solve_method, "auto, zero_sum or general_sum")
        ->check(CLI::IsMember({"auto", "zero_sum", "general_sum"}));
    solve->add_option("--eps", solve_eps, "Certification tolerance");
    solve->add_option("--out", solve_out, "Report JSON path");
    solve->add_option("--policy-out", solve_policy_out, "Policy JSON path");

    // ---- eval ----
    auto* eval = app.add_subcommand("eval", "Robust value of a fixed policy");
    std::string eval_game, eval_policy, eval_out;
    eval->add_option("--game", eval_game, "Instance JSON file")->required();
    eval->add_option("--policy", eval_policy, "Policy JSON file")->required();
    eval->add_option("--out", eval_out, "Report JSON path");

    // ---- gap ----
    auto* gap = app.add_subcommand("gap", "Robust equilibrium gap of a policy");
    std::string gap_game, gap_policy, gap_out;
    prec_t gap_eps = 1e-6;
    gap->add_option("--game", gap_game, "Instance JSON file")->required();
    gap->add_option("--policy", gap_policy, "Policy JSON file")->required();
    gap->add_option("--eps", gap_eps, "Certification tolerance");
    gap->add_option("--out", gap_out, "Report JSON path");

    // ---- reduce ----
    auto* red = app.add_subcommand("reduce", "Embed a bimatrix game in a robust zero-sum game");
    std::string red_bimatrix, red_variant = "reward", red_out, red_report;
    red->add_option("--bimatrix", red_bimatrix, "JSON file with payoff fields 'A' and 'B'")
        ->required();
    red->add_option("--variant", red_variant, "reward or transition")
        ->check(CLI::IsMember({"reward", "transition"}));
    red->add_option("--out", red_out, "Output instance JSON path")->required();
    red->add_option("--report", red_report, "Report JSON path");

    // ---- check_equivalence ----
    auto* chk = app.add_subcommand(
        "check_equivalence", "Compare support-function and realized-model evaluation");
    std::string chk_game, chk_policy, chk_out;
    size_t chk_trials = 100;
    uint64_t chk_seed = 0;
    prec_t chk_eps = 0.0;
    int chk_jobs = 1;
    chk->add_option("--game", chk_game, "Instance JSON file")->required();
    chk->add_option("--policy", chk_policy, "Policy JSON file (default: random policies)");
    chk->add_option("--trials", chk_trials, "Number of random policies");
    chk->add_option("--seed", chk_seed, "Random seed");
    auto* chk_eps_opt = chk->add_option("--eps", chk_eps, "Tolerance (default per dual type)");
    chk->add_option("--jobs", chk_jobs, "Worker threads (does not affect the report)");
    chk->add_option("--out", chk_out, "Report JSON path");

    // ---- gen ----
    auto* gen_cmd = app.add_subcommand("gen", "Generate an instance");
    std::string gen_kind, gen_out, gen_kernel = "shannon", gen_rect = "sa";
    uint64_t gen_seed = 0;
    gen::InstanceConfig cfg;
    gen_cmd
        ->add_option("--kind", gen_kind,
                     "random, decomposable, matching_pennies, prisoners_dilemma, "
                     "battle_of_sexes")
        ->required();
    gen_cmd->add_option("--out", gen_out, "Output instance JSON path")->required();
    gen_cmd->add_option("--seed", gen_seed, "Random seed");
    gen_cmd->add_option("--players", cfg.num_players, "Number of players");
    gen_cmd->add_option("--states", cfg.num_states, "Number of states");
    gen_cmd->add_option("--actions", cfg.num_actions, "Actions per player (e.g. 4,4)")
        ->delimiter(',');
    gen_cmd->add_option("--horizon", cfg.horizon, "Horizon");
    gen_cmd->add_option("--initial-state", cfg.initial_state, "Initial state");
    gen_cmd->add_flag("--zero-sum", cfg.zero_sum, "Zero-sum nominal rewards");
    gen_cmd->add_option("--reward-family", cfg.reward_family,
                        "none, singleton, interval, opnorm, kernel");
    gen_cmd->add_option("--transition-family", cfg.transition_family,
                        "none, tv, kl, chi2, wasserstein, lp_ball");
    gen_cmd->add_option("--interval-width", cfg.interval_width, "Interval half-width scale");
    gen_cmd->add_option("--alpha", cfg.alpha, "Opnorm magnitude");
    gen_cmd->add_option("--p", cfg.opnorm_p, "Opnorm own-marginal exponent");
    gen_cmd->add_option("--q", cfg.opnorm_q, "Opnorm opponent-marginal exponent");
    gen_cmd->add_option("--kernel", gen_kernel, "shannon, kl_reference, tsallis, renyi");
    gen_cmd->add_option("--tau", cfg.tau, "Kernel temperature");
    gen_cmd->add_option("--order", cfg.renyi_order, "Renyi order");
    gen_cmd->add_option("--radius", cfg.radius, "Transition set radius");
    gen_cmd->add_option("--rect", gen_rect, "sa or s")->check(CLI::IsMember({"sa", "s"}));
    gen_cmd->add_option("--lp-p", cfg.lp_p, "s-rectangular ball norm exponent");
    gen_cmd->add_option("--reward-scale", cfg.reward_scale, "Nominal reward scale");

    // ---- oracle ----
    auto* orc = app.add_subcommand("oracle", "Cross-check transition duals against oracles");
    std::string orc_family, orc_out;
    size_t orc_trials = 100;
    int orc_states = 3;
    uint64_t orc_seed = 0;
    prec_t orc_eps = 0.0;
    int orc_jobs = 1;
    orc->add_option("--family", orc_family, "tv, kl, chi2 or wasserstein")
        ->required()
        ->check(CLI::IsMember({"tv", "kl", "chi2", "wasserstein"}));
    orc->add_option("--trials", orc_trials, "Number of random triples");
    orc->add_option("--states", orc_states, "Distribution size");
    orc->add_option("--seed", orc_seed, "Random seed");
    auto* orc_eps_opt = orc->add_option("--eps", orc_eps, "Tolerance (default per family)");
    orc->add_option("--jobs", orc_jobs, "Worker threads (does not affect the report)");
    orc->add_option("--out", orc_out, "Report JSON path");

    try {
        app.parse(argc, argv);
        if (*solve)
            return run_solve(solve_game, solve_method, solve_eps, solve_out, solve_policy_out);
        if (*eval) return run_eval(eval_game, eval_policy, eval_out);
        if (*gap) return run_gap(gap_game, gap_policy, gap_eps, gap_out);
        if (*red) return run_reduce(red_bimatrix, red_variant, red_out, red_report);
        if (*chk)
            return run_check_equivalence(chk_game, chk_policy, chk_trials, chk_seed, chk_eps,
                                         chk_eps_opt->count() > 0, chk_jobs, chk_out);
        if (*gen_cmd) return run_gen(gen_kind, gen_out, gen_seed, cfg, gen_kernel, gen_rect);
        if (*orc)
            return run_oracle(orc_family, orc_trials, orc_states, orc_seed, orc_eps,
                              orc_eps_opt->count() > 0, orc_jobs, orc_out);
        return EXIT_INPUT;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_TOLERANCE;
    }
}

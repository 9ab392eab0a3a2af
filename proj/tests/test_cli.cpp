// Copyright (c) 2026 rmgkit developers
// Distributed under the MIT License (see LICENSE)
//
// End-to-end tests for the rmg command line tool. Each case runs the real
// binary (path injected by the build as RMG_CLI_PATH) against files in a
// fresh temporary directory and inspects exit codes and written reports.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rmg/game.hpp"
#include "rmg/io.hpp"

namespace fs = std::filesystem;

namespace {

/// Run the rmg binary with the given arguments, discarding stderr.
/// Returns the process exit code.
int run_cli(const std::string& args) {
    const std::string cmd = std::string(RMG_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

nlohmann::json load_report(const fs::path& path) {
    return nlohmann::json::parse(slurp(path));
}

/// A scratch directory removed when the test case ends.
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rmg_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static inline int counter = 0;
};

} // namespace

TEST_CASE("gen writes loadable instances for every named kind") {
    TempDir dir;
    for (const std::string kind :
         {"matching_pennies", "prisoners_dilemma", "battle_of_sexes"}) {
        const std::string out = dir.file(kind + ".json");
        CHECK(run_cli("gen --kind " + kind + " --out " + out) == 0);
        const rmg::RMGInstance inst = rmg::load_instance(out);
        CHECK(inst.num_players == 2);
    }

    const std::string rnd = dir.file("random.json");
    CHECK(run_cli("gen --kind random --out " + rnd +
                  " --seed 7 --states 3 --actions 2,3 --horizon 4"
                  " --reward-family interval --transition-family tv --radius 0.2") == 0);
    const rmg::RMGInstance inst = rmg::load_instance(rnd);
    CHECK(inst.num_states == 3);
    CHECK(inst.num_actions == std::vector<int>{2, 3});
    CHECK(inst.horizon == 4);
    REQUIRE(inst.reward_set(0, 0, 0) != nullptr);
    CHECK(inst.reward_set(0, 0, 0)->family == rmg::RewardUncertainty::Family::interval);

    const std::string dec = dir.file("decomposable.json");
    CHECK(run_cli("gen --kind decomposable --out " + dec +
                  " --seed 3 --states 2 --actions 3,3 --horizon 3 --tau 0.1") == 0);
    const rmg::RMGInstance dinst = rmg::load_instance(dec);
    CHECK(dinst.zero_sum);
}

TEST_CASE("solve, eval and gap agree on matching pennies") {
    TempDir dir;
    const std::string game = dir.file("mp.json");
    REQUIRE(run_cli("gen --kind matching_pennies --out " + game) == 0);

    const std::string report = dir.file("solve.json");
    const std::string policy = dir.file("policy.json");
    CHECK(run_cli("solve --game " + game + " --eps 1e-8 --out " + report +
                  " --policy-out " + policy) == 0);

    const auto solve = load_report(report);
    CHECK(solve["schema"] == "rmg-report-v1");
    CHECK(solve["command"] == "solve");
    CHECK(solve["method"] == "zero_sum");
    CHECK(solve["certified"] == true);
    CHECK(std::abs(solve["initial_values"][0].get<double>()) <= 1e-7);
    CHECK(solve["gap"]["max"].get<double>() <= 1e-8);

    const std::string eval_report = dir.file("eval.json");
    CHECK(run_cli("eval --game " + game + " --policy " + policy + " --out " +
                  eval_report) == 0);
    const auto eval = load_report(eval_report);
    CHECK(eval["command"] == "eval");
    CHECK(std::abs(eval["initial_values"][0].get<double>() -
                   solve["initial_values"][0].get<double>()) <= 1e-9);

    const std::string gap_report = dir.file("gap.json");
    CHECK(run_cli("gap --game " + game + " --policy " + policy +
                  " --eps 1e-6 --out " + gap_report) == 0);
    const auto gap = load_report(gap_report);
    CHECK(gap["certified"] == true);
    CHECK(gap["gap"]["max"].get<double>() <= 1e-8);
}

TEST_CASE("reduce embeds a bimatrix file and the result solves") {
    TempDir dir;
    const std::string bimatrix = dir.file("bimatrix.json");
    rmg::write_text_file(bimatrix,
                         R"({"A": [[2.0, 0.0], [0.0, 1.0]],)"
                         R"( "B": [[1.0, 0.0], [0.0, 2.0]]})");

    for (const std::string variant : {"reward", "transition"}) {
        const std::string inst_path = dir.file(variant + "_inst.json");
        const std::string report_path = dir.file(variant + "_report.json");
        CHECK(run_cli("reduce --bimatrix " + bimatrix + " --variant " + variant +
                      " --out " + inst_path + " --report " + report_path) == 0);
        const auto report = load_report(report_path);
        CHECK(report["command"] == "reduce");
        CHECK(report["variant"] == variant);
        CHECK(report["shift"].size() == 2);

        const rmg::RMGInstance inst = rmg::load_instance(inst_path);
        CHECK(inst.zero_sum);

        // The reward variant carries interval sets, which the zero-sum planner
        // rejects (they do not separate player-wise); auto must fall back to
        // the general-sum oracle. The transition variant folds its per-action
        // duals into the stage matrices and stays on the zero-sum path.
        const std::string solve_path = dir.file(variant + "_solve.json");
        CHECK(run_cli("solve --game " + inst_path + " --method auto --eps 1e-6"
                      " --out " + solve_path) == 0);
        const auto solved = load_report(solve_path);
        CHECK(solved["certified"] == true);
        CHECK(solved["method"] == (variant == "reward" ? "general_sum" : "zero_sum"));
    }
}

TEST_CASE("check_equivalence reports are byte-stable across runs and jobs") {
    TempDir dir;
    const std::string game = dir.file("game.json");
    REQUIRE(run_cli("gen --kind random --out " + game +
                    " --seed 11 --states 2 --actions 2,2 --horizon 3"
                    " --reward-family opnorm --transition-family tv --radius 0.3") == 0);

    const std::string r1 = dir.file("r1.json"), r2 = dir.file("r2.json"),
                      r4 = dir.file("r4.json");
    CHECK(run_cli("check_equivalence --game " + game +
                  " --trials 12 --seed 5 --jobs 1 --out " + r1) == 0);
    CHECK(run_cli("check_equivalence --game " + game +
                  " --trials 12 --seed 5 --jobs 1 --out " + r2) == 0);
    CHECK(run_cli("check_equivalence --game " + game +
                  " --trials 12 --seed 5 --jobs 4 --out " + r4) == 0);
    const std::string bytes = slurp(r1);
    CHECK(bytes == slurp(r2));
    CHECK(bytes == slurp(r4));

    const auto report = load_report(r1);
    CHECK(report["pass"] == true);
    CHECK(report["trials"] == 12);
    CHECK(report["per_trial_diff"].size() == 12);
}

TEST_CASE("oracle subcommand cross-checks duals") {
    TempDir dir;
    const std::string out = dir.file("oracle.json");
    CHECK(run_cli("oracle --family tv --trials 20 --states 3 --seed 2 --out " + out) == 0);
    const auto report = load_report(out);
    CHECK(report["pass"] == true);
    CHECK(report["max_value_diff"].get<double>() <= 1e-4);

    // The vertex-enumeration oracle refuses large supports.
    CHECK(run_cli("oracle --family tv --states 12 --out " + dir.file("x.json")) == 1);
}

TEST_CASE("input errors exit 1, tolerance failures exit 2 with a report") {
    TempDir dir;
    CHECK(run_cli("solve --game " + dir.file("missing.json")) == 1);
    CHECK(run_cli("gen --kind not_a_kind --out " + dir.file("y.json")) == 1);

    rmg::write_text_file(dir.file("garbage.json"), "{\"schema\": \"nope\"}");
    CHECK(run_cli("eval --game " + dir.file("garbage.json") + " --policy " +
                  dir.file("garbage.json")) == 1);

    // An impossible tolerance makes check_equivalence fail *after* doing the
    // work: exit code 2 and a report with pass=false.
    const std::string game = dir.file("kl_game.json");
    REQUIRE(run_cli("gen --kind random --out " + game +
                    " --seed 9 --states 2 --actions 2,2 --horizon 2"
                    " --reward-family none --transition-family kl --radius 0.2") == 0);
    const std::string report_path = dir.file("fail.json");
    CHECK(run_cli("check_equivalence --game " + game +
                  " --trials 4 --seed 1 --eps 1e-18 --out " + report_path) == 2);
    const auto report = load_report(report_path);
    CHECK(report["pass"] == false);
    CHECK(report["max_diff"].get<double>() > 1e-18);
}

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path& scratch() {
    static const fs::path d = [] {
        auto p = fs::temp_directory_path() / "qdl_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

// Runs the tool with stdout to `out` (relative to scratch) and returns its exit code.
int qdl(const std::string& args, const std::string& out = "stdout.txt", const std::string& env = "") {
    const std::string cmd = "cd " + scratch().string() + " && " + env + " " + QDL_CLI_PATH + " " + args + " > " + out +
                            " 2> stderr.txt";
    const int st = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

std::string slurp(const std::string& name) {
    std::ifstream in(scratch() / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

json load(const std::string& name) { return json::parse(slurp(name)); }

std::vector<std::vector<std::string>> csv(const std::string& name) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(name));
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> r;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) r.push_back(cell);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_CASE("verify lemma41 passes with exit 0") {
    REQUIRE(qdl("verify lemma41 --X 1e4 --phi fejer:1.5", "l41.json") == 0);
    const auto j = load("l41.json");
    CHECK(j["passed"] == true);
    for (const auto& r : j["residuals"]) CHECK(r["value"].get<double>() < 1e-6);
    CHECK(j.contains("tool_version"));
    CHECK(j["config"]["X"] == 1e4);
}

TEST_CASE("expand report: five named terms summing to the value") {
    REQUIRE(qdl("expand --X 1e6 --phi fejer:1.5 --w gaussian --j exact", "exp.json") == 0);
    const auto j = load("exp.json");
    CHECK(j["method"] == "expansion");
    REQUIRE(j["terms"].size() == 5);
    double s = 0.0;
    for (const auto& [k, v] : j["terms"].items()) s += v.get<double>();
    CHECK(std::abs(s - j["value"].get<double>()) < 1e-12);
    for (const char* key : {"value", "method", "terms", "error_budget", "params", "diagnostics", "tool_version",
                            "config", "wall_time_s"})
        CHECK(j.contains(key));
    CHECK(j["diagnostics"].contains("term_errors"));
    CHECK(j["config"]["j"] == "exact");
}

TEST_CASE("sweep writes a CSV table with a header row") {
    REQUIRE(qdl("sweep --sigma 0.5,0.8,1.0,1.2,1.5,2.5 --X 1e4 --j asym", "sweep.csv") == 0);
    const auto t = csv("sweep.csv");
    REQUIRE(t.size() == 7);
    CHECK(t[0][0] == "sigma");
    const auto col = [&](const std::string& name) {
        const auto it = std::find(t[0].begin(), t[0].end(), name);
        REQUIRE(it != t[0].end());
        std::vector<double> v;
        for (std::size_t i = 1; i < t.size(); ++i) v.push_back(std::stod(t[i][it - t[0].begin()]));
        return v;
    };
    const auto main = col("main"), j1 = col("J_phi_hat_1");
    CHECK(main[0] == main[1]);
    CHECK(main[1] == main[2]);
    CHECK(main[3] > main[2]);
    CHECK(main[5] > main[4]);
    CHECK(j1[2] == 0.0);
    CHECK(j1[3] != 0.0);
}

TEST_CASE("usage errors exit 1") {
    CHECK(qdl("") == 1);
    CHECK(qdl("frobnicate") == 1);
    CHECK(qdl("expand --j sometimes") == 1);
    CHECK(qdl("verify nosuch") == 1);
    CHECK(qdl("predict --X 10") == 1);                 // X below 2 pi e
    CHECK(qdl("verify lemma41 --phi bump2:1.5") == 1);  // no entire extension
    std::ofstream(scratch() / "bad.cfg") << "colour = blue\n";
    CHECK(qdl("expand --config bad.cfg") == 1);
    CHECK(qdl("--help") == 0);
}

TEST_CASE("resource and verification failures exit 2 and 3") {
    CHECK(qdl("expand --out /nonexistent/dir/x.json") == 2);
    CHECK(qdl("verify jx --X 20", "jx.json") == 3);
    CHECK(load("jx.json")["passed"] == false);
}

TEST_CASE("config file: flags > config > defaults") {
    std::ofstream(scratch() / "run.cfg") << "# comment\nX = 1e4\nphi = fejer:0.8\nj = asym\n";
    REQUIRE(qdl("expand --config run.cfg --X 1e5", "cfg.json") == 0);
    const auto j = load("cfg.json");
    CHECK(j["config"]["X"] == 1e5);           // flag wins
    CHECK(j["config"]["phi"] == "fejer:0.8");  // from the file
    CHECK(j["config"]["j"] == "asym");
    CHECK(j["config"]["w"] == "gaussian");     // default
    CHECK(j["params"]["j_mode"] == "asym");
}

TEST_CASE("reports are identical across thread counts") {
    REQUIRE(qdl("predict --X 1e4 --phi bump2:0.8 --threads 1", "t1.json") == 0);
    REQUIRE(qdl("predict --X 1e4 --phi bump2:0.8 --threads 3", "t3.json") == 0);
    auto a = load("t1.json"), b = load("t3.json");
    for (auto* j : {&a, &b}) {
        j->erase("wall_time_s");
        (*j)["config"].erase("threads");
    }
    CHECK(a.dump() == b.dump());
}

TEST_CASE("empirical run fills the zero cache named by QDL_CACHE_DIR") {
    const auto cache = scratch() / "zc";
    REQUIRE(qdl("empirical --X 60 --T 30 --seed 3", "emp.json", "QDL_CACHE_DIR=" + cache.string()) == 0);
    const auto j = load("emp.json");
    CHECK(j["method"] == "empirical");
    CHECK(j["config"]["cache_dir"] == cache.string());
    CHECK(j["params"]["bootstrap_se"].get<double>() > 0.0);
    REQUIRE(fs::exists(cache / "zeros_-3.csv"));
    std::ifstream in(cache / "zeros_-3.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "d,T,gamma");

    // same seed, now from the cache: same numbers
    REQUIRE(qdl("empirical --X 60 --T 30 --seed 3", "emp2.json", "QDL_CACHE_DIR=" + cache.string()) == 0);
    CHECK(std::abs(load("emp2.json")["value"].get<double>() - j["value"].get<double>()) < 1e-11);

    REQUIRE(qdl("zeros --X 60 --T 30 --format csv", "zeros.csv", "QDL_CACHE_DIR=" + cache.string()) == 0);
    const auto t = csv("zeros.csv");
    CHECK(t[0] == std::vector<std::string>{"d", "zeros", "count_estimate", "complete"});
    CHECK(t.size() > 10);
}

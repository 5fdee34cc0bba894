#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/experiment.hpp"
#include "doctest.h"

using namespace gcq;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(bool(in));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("config parser reads assignments and skips comments") {
    const ExperimentConfig cfg = config_parse(
        "# study header\n"
        "id = example1\n"
        "\n"
        "kernel = fracint:alpha=0.3   # trailing note\n"
        "data = t^0.25\n"
        "gamma = 2.5\n"
        "N = 8,16,32\n"
        "tol = 1e-10\n"
        "seed = 11\n");
    CHECK(cfg.id == "example1");
    CHECK(cfg.kernel == "fracint:alpha=0.3");
    CHECK(cfg.data == "t^0.25");
    CHECK(cfg.gamma == doctest::Approx(2.5));
    CHECK(cfg.N == std::vector<int>{8, 16, 32});
    CHECK(cfg.tol == doctest::Approx(1e-10));
    CHECK(cfg.seed == 11u);
    CHECK(cfg.tableau == "radau2");  // untouched default
}

TEST_CASE("config parser rejects malformed input") {
    CHECK_THROWS_AS(config_parse("volume = 11\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_parse("id example1\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_parse("N = 16,16\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_parse("N = 32,16\n"), std::invalid_argument);
    CHECK_THROWS_AS(config_parse("N = \n"), std::invalid_argument);
    CHECK_THROWS_AS(config_parse("tol = sloppy\n"), std::invalid_argument);
}

TEST_CASE("eoc_table computes pairwise orders for doubling step counts") {
    const auto rows = eoc_table({{16, 1.0}, {32, 0.125}, {64, 0.015625}});
    REQUIRE(rows.size() == 3);
    CHECK(std::isnan(rows[0].eoc));
    CHECK(rows[1].eoc == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rows[2].eoc == doctest::Approx(3.0).epsilon(1e-12));

    const auto flat = eoc_table({{8, 0.25}, {16, 0.25}});
    CHECK(flat[1].eoc == doctest::Approx(0.0));

    const auto pair = eoc_table({{64, 1e-2}, {128, 1.3e-3}});
    CHECK(pair[1].eoc == doctest::Approx(std::log2(1e-2 / 1.3e-3)).epsilon(1e-12));

    CHECK_THROWS_AS(eoc_table({{16, 1.0}, {48, 0.1}}), std::invalid_argument);
}

TEST_CASE("run_experiment writes level CSVs, error table, diagnostics") {
    ExperimentConfig cfg = config_parse(
        "id = example1\n"
        "kernel = fracint:alpha=0.5\n"
        "data = t^0.5\n"
        "mesh = graded\n"
        "gamma = 3\n"
        "N = 8,16\n"
        "tol = 1e-10\n"
        "out = /tmp/gcq_test_exp/run\n");
    std::filesystem::create_directories("/tmp/gcq_test_exp");
    std::remove("/tmp/gcq_test_exp/run_N8.csv");
    std::remove("/tmp/gcq_test_exp/run_N16.csv");
    std::remove("/tmp/gcq_test_exp/run_errors.csv");
    std::remove("/tmp/gcq_test_exp/run_diag.jsonl");

    const ExperimentOutputs out = run_experiment(cfg);
    REQUIRE(out.files.size() == 4);
    REQUIRE(out.report.N == std::vector<int>{8, 16});
    CHECK(out.report.err[0] > out.report.err[1]);
    CHECK(out.report.err[1] < 1e-3);
    CHECK(out.report.eoc[1] > 1.0);

    const std::string level = slurp("/tmp/gcq_test_exp/run_N8.csv");
    CHECK(level.rfind("n,t,u,exact,abs_error\n", 0) == 0);
    // header + initial node + 8 steps
    CHECK(std::count(level.begin(), level.end(), '\n') == 10);

    const std::string table = slurp("/tmp/gcq_test_exp/run_errors.csv");
    CHECK(table.rfind("N,tau_max,max_err,eoc\n", 0) == 0);
    CHECK(table.find("\n8,") != std::string::npos);

    const std::string diag = slurp("/tmp/gcq_test_exp/run_diag.jsonl");
    CHECK(std::count(diag.begin(), diag.end(), '\n') == 2);
    CHECK(diag.find("\"N\":8") != std::string::npos);
    CHECK(diag.find("\"kind\":\"convolve\"") != std::string::npos);
}

TEST_CASE("rerunning a study reproduces its CSV artifacts byte for byte") {
    ExperimentConfig cfg = config_parse(
        "id = example1\n"
        "kernel = ka:alpha=0.4\n"
        "data = t^0.3\n"
        "mesh = graded\n"
        "gamma = 3\n"
        "N = 8,16\n"
        "tol = 1e-10\n"
        "out = /tmp/gcq_test_exp/repeat\n");
    std::filesystem::create_directories("/tmp/gcq_test_exp");
    run_experiment(cfg);
    const std::string level1 = slurp("/tmp/gcq_test_exp/repeat_N16.csv");
    const std::string table1 = slurp("/tmp/gcq_test_exp/repeat_errors.csv");
    run_experiment(cfg);
    CHECK(slurp("/tmp/gcq_test_exp/repeat_N16.csv") == level1);
    CHECK(slurp("/tmp/gcq_test_exp/repeat_errors.csv") == table1);
}

TEST_CASE("run_experiment rejects empty sweeps and unknown ids") {
    ExperimentConfig cfg;
    cfg.kernel = "fracint:alpha=0.5";
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);  // empty N
    cfg.N = {8};
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);  // id "custom", no kind
}

TEST_CASE("experiment_mesh realizes the configured family") {
    ExperimentConfig cfg;
    cfg.mesh = "graded";
    cfg.T = 2.0;
    cfg.gamma = 3.0;
    const Mesh m = experiment_mesh(cfg, 4);
    REQUIRE(m.steps() == 4);
    CHECK(m.t.back() == doctest::Approx(2.0));
    CHECK(m.t[1] == doctest::Approx(2.0 * std::pow(0.25, 3.0)));

    cfg.mesh = "uniform";
    CHECK(experiment_mesh(cfg, 4).t[1] == doctest::Approx(0.5));

    cfg.mesh = "twosing";
    cfg.sigma = 0.4;
    cfg.gamma1 = 2.0;
    cfg.gamma2 = 3.0;
    cfg.T = 1.0;
    const Mesh ts = experiment_mesh(cfg, 8);
    CHECK(ts.t.back() == doctest::Approx(1.0));

    cfg.mesh = "corkscrew";
    CHECK_THROWS_AS(experiment_mesh(cfg, 8), std::invalid_argument);
}

TEST_CASE("fmt17 round trips doubles exactly") {
    for (double x : {1.0 / 3.0, 6.02e23, -1.25e-13, 0.0, 3.0}) {
        const std::string s = fmt17(x);
        CHECK(std::stod(s) == x);
    }
}

// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "knnlab/error.hpp"
#include "knnlab/harness.hpp"

using namespace knnlab;
using nlohmann::json;

namespace {

ResultRow row(std::size_t n, double excess, double sem) {
    ResultRow r;
    r.problem_name = "p";
    r.n = n;
    r.k = 1;
    r.R = 10;
    r.M = 5;
    r.err_mean = excess;
    r.err_sem = sem;
    r.excess_risk = excess;
    return r;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.problem = {"euclidean_linear", {}};
    c.n_grid = {20, 80};
    c.repetitions = 12;
    c.test_draws = 10;
    c.master_seed = 77;
    c.record_timing = false;
    return c;
}

}  // namespace

TEST(Config, ParsesEveryKey) {
    const auto c = config_from_json(json::parse(R"({
        "problem": {"name": "two_valued", "params": {"points": 50, "r": 2}},
        "n_grid": [10, 40], "schedule": {"kind": "fixed", "k": 3}, "policy": "index_order",
        "R": 5, "M": 7, "master_seed": 18446744073709551615, "parallelism": 3,
        "output_path": "x.csv", "record_timing": false})"));
    EXPECT_EQ(c.problem.name, "two_valued");
    EXPECT_EQ(c.problem.params.at("r"), 2.0);
    EXPECT_EQ(c.n_grid, (std::vector<std::size_t>{10, 40}));
    EXPECT_EQ(c.schedule.kind, KSchedule::Kind::Fixed);
    EXPECT_EQ(c.schedule.fixed_k, 3u);
    EXPECT_EQ(c.policy, TieBreakPolicy::IndexOrder);
    EXPECT_EQ(c.repetitions, 5u);
    EXPECT_EQ(c.test_draws, 7u);
    EXPECT_EQ(c.master_seed, 18446744073709551615ull);
    EXPECT_EQ(c.parallelism, 3u);
    EXPECT_FALSE(c.record_timing);
    const auto again = config_from_json(to_json(c));
    EXPECT_EQ(to_json(again), to_json(c));
}

TEST(Config, RejectsMalformedInput) {
    const char* bad[] = {
        R"([1, 2])",
        R"({"n_grid": [10]})",
        R"({"problem": "constant", "n_grid": [10], "repetitons": 5})",
        R"({"problem": "constant", "n_grid": []})",
        R"({"problem": "constant", "n_grid": [10, 10]})",
        R"({"problem": "constant", "n_grid": [0, 10]})",
        R"({"problem": "constant", "n_grid": [10], "R": 1})",
        R"({"problem": "constant", "n_grid": [10], "M": 0})",
        R"({"problem": "constant", "n_grid": [10], "R": "many"})",
        R"({"problem": "constant", "n_grid": [10], "schedule": "ceil_cube"})",
        R"({"problem": "constant", "n_grid": [10], "schedule": {"kind": "fixed", "k": 11}})",
        R"({"problem": "constant", "n_grid": [10], "policy": "coin"})",
        R"({"problem": "nope", "n_grid": [10]})",
        R"({"problem": {"name": "constant", "params": {"valu": 1}}, "n_grid": [10]})",
    };
    for (const char* text : bad) EXPECT_THROW(config_from_json(json::parse(text)), UsageError) << text;
    EXPECT_THROW(load_config("/nonexistent/dir/config.json"), UsageError);
}

TEST(Csv, HeaderAndRoundTrip) {
    std::vector<ResultRow> rows{row(10, 0.1, 0.01), row(100, 1.0 / 3.0, 1e-17)};
    rows[1].problem_name = "p";
    rows[1].wall_ms = 42;
    rows[1].master_seed = 18446744073709551615ull;
    const auto text = rows_to_csv(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
    std::istringstream in(text);
    EXPECT_EQ(read_rows(in), rows);
}

TEST(Csv, RejectsBadInput) {
    std::istringstream empty("");
    EXPECT_THROW(read_rows(empty), UsageError);
    std::istringstream header("n,k\n");
    EXPECT_THROW(read_rows(header), UsageError);
    std::istringstream short_row(std::string(kCsvHeader) + "\np,1,2\n");
    EXPECT_THROW(read_rows(short_row), UsageError);
    std::istringstream bad_number(std::string(kCsvHeader) + "\np,x,1,1,1,0,0,0,0,0,0\n");
    EXPECT_THROW(read_rows(bad_number), UsageError);
}

TEST(Run, RowsAreAPureFunctionOfTheConfig) {
    auto c = small_config();
    const auto a = run_experiment(c);
    c.parallelism = 4;
    const auto b = run_experiment(c);
    EXPECT_EQ(a, b);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0].k, 5u);
    EXPECT_EQ(a[1].k, 9u);
    EXPECT_DOUBLE_EQ(a[0].bayes_error, 0.25);
    EXPECT_DOUBLE_EQ(a[0].excess_risk, a[0].err_mean - 0.25);
    EXPECT_EQ(a[0].wall_ms, 0);
    c.master_seed = 78;
    EXPECT_NE(run_experiment(c), a);
}

TEST(Run, WritesCsvAndReportsUnwritablePaths) {
    auto c = small_config();
    const auto dir = std::filesystem::temp_directory_path() / "knnlab_harness_test";
    std::filesystem::create_directories(dir);
    c.output_path = (dir / "out.csv").string();
    const auto rows = run_and_write(c);
    std::ifstream in(c.output_path);
    EXPECT_EQ(read_rows(in), rows);
    c.output_path = (dir / "missing" / "out.csv").string();
    EXPECT_THROW(run_and_write(c), UsageError);
    c.output_path.clear();
    EXPECT_THROW(run_and_write(c), UsageError);
    std::filesystem::remove_all(dir);
}

TEST(Checks, Consistency) {
    EXPECT_TRUE(check_consistency({row(10, 0.2, 0.01), row(100, 0.1, 0.01), row(1000, 0.01, 0.001)}, 0.02).pass);
    // Unsorted input is sorted by n first.
    EXPECT_TRUE(check_consistency({row(1000, 0.01, 0.001), row(10, 0.2, 0.01)}, 0.02).pass);
    // Final excess risk too large.
    EXPECT_FALSE(check_consistency({row(10, 0.2, 0.01), row(100, 0.05, 0.01)}, 0.02).pass);
    // A rise within twice the standard error is tolerated; beyond it is not.
    EXPECT_TRUE(check_consistency({row(10, 0.010, 0.01), row(100, 0.015, 0.003)}, 0.02).pass);
    EXPECT_FALSE(check_consistency({row(10, 0.010, 0.01), row(100, 0.018, 0.003)}, 0.02).pass);
    EXPECT_THROW(check_consistency({row(10, 0.1, 0.0)}, 0.02), UsageError);
    EXPECT_THROW(check_consistency({row(10, 0.1, 0.0), row(10, 0.1, 0.0)}, 0.02), UsageError);
}

TEST(Checks, ChernoffFloor) {
    EXPECT_NEAR(two_valued_error_floor(18), 1.0 / 3.0 - std::exp(-1.0), 1e-15);
    auto r = row(100, 0.3, 0.01);
    r.problem_name = "two_valued";
    r.k = 100;
    EXPECT_TRUE(check_chernoff_bound({r}).pass);
    r.err_mean = 0.2;
    EXPECT_FALSE(check_chernoff_bound({r}).pass);
    EXPECT_THROW(check_chernoff_bound({row(1, 0, 0)}), UsageError);
    EXPECT_THROW(check_chernoff_bound({}), UsageError);
}

TEST(Restriction, SubspacesPredictIdentically) {
    const auto cg = problem_cerou_guyader(500);
    const auto r1 = restriction_equivalence_test(cg, cg_nonzero_atoms(cg), 300, 17, 5, 50);
    EXPECT_TRUE(r1.pass);
    EXPECT_EQ(r1.agreed, r1.queries);
    EXPECT_EQ(r1.queries, 50u);
    const auto r2 = restriction_equivalence_test(cg, whole_space(cg), 300, 17, 5, 50);
    EXPECT_TRUE(r2.pass);
    const auto hh = problem_hedgehog(6);
    const auto r3 = restriction_equivalence_test(hh, hedgehog_spine(hh, 3), 200, 9, 5, 50, TieBreakPolicy::IndexOrder);
    EXPECT_TRUE(r3.pass);
}

TEST(Restriction, RejectsBadArguments) {
    const auto hh = problem_hedgehog(6);
    EXPECT_THROW(hedgehog_spine(hh, 6), UsageError);
    EXPECT_THROW(cg_nonzero_atoms(hh), UsageError);
    EXPECT_THROW(restriction_equivalence_test(hh, whole_space(hh), 10, 11, 1), UsageError);
}

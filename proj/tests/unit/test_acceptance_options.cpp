// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "knnlab/acceptance.hpp"
#include "knnlab/error.hpp"

using namespace knnlab;
using nlohmann::json;

namespace {

VerifyOptions quick(std::vector<int> criteria) {
    VerifyOptions o;
    o.n_grid = {50, 150};
    o.repetitions = 10;
    o.test_draws = 10;
    o.tiebreak_cases = 300;
    o.nagata_instances = 4;
    o.families_per_size = 4;
    o.max_family_size = 7;
    o.restriction_queries = 30;
    o.reproducibility_parallelism = {1, 3};
    o.criteria = std::move(criteria);
    return o;
}

}  // namespace

TEST(VerifyOptions, DefaultsAreThePublishedSettings) {
    const VerifyOptions o;
    EXPECT_EQ(o.n_grid, (std::vector<std::size_t>{100, 1000, 10000}));
    EXPECT_EQ(o.repetitions, 200u);
    EXPECT_EQ(o.test_draws, 50u);
    EXPECT_EQ(o.tiebreak_cases, 10000u);
    EXPECT_EQ(o.reproducibility_parallelism, (std::vector<std::size_t>{1, 4, 8}));
    EXPECT_EQ(o.vote_tie, VoteTie::LabelOne);
}

TEST(VerifyOptions, ParsesOverrides) {
    const auto o = verify_options_from_json(json::parse(
        R"({"n_grid": [10, 20], "repetitions": 3, "criteria": [2, 5], "vote_tie": "label_zero",
            "reproducibility_parallelism": [2]})"));
    EXPECT_EQ(o.n_grid, (std::vector<std::size_t>{10, 20}));
    EXPECT_EQ(o.repetitions, 3u);
    EXPECT_EQ(o.criteria, (std::vector<int>{2, 5}));
    EXPECT_EQ(o.vote_tie, VoteTie::LabelZero);
    EXPECT_EQ(o.reproducibility_parallelism, (std::vector<std::size_t>{2}));
    EXPECT_EQ(o.test_draws, 50u);
}

TEST(VerifyOptions, RejectsBadInput) {
    const char* bad[] = {
        R"([])",
        R"({"repetitons": 3})",
        R"({"n_grid": [10]})",
        R"({"n_grid": [20, 10]})",
        R"({"repetitions": 1})",
        R"({"test_draws": 0})",
        R"({"test_draws": -3})",
        R"({"test_draws": "ten"})",
        R"({"max_family_size": 21})",
        R"({"criteria": [0]})",
        R"({"criteria": [10]})",
        R"({"criteria": 3})",
        R"({"vote_tie": "coin"})",
    };
    for (const char* text : bad) EXPECT_THROW(verify_options_from_json(json::parse(text)), UsageError) << text;
}

TEST(Verify, TitlesAndIds) {
    for (int id = 1; id <= kCriterionCount; ++id) EXPECT_FALSE(criterion_title(id).empty());
    EXPECT_THROW(run_criterion(0, 1, quick({})), UsageError);
    EXPECT_THROW(run_criterion(10, 1, quick({})), UsageError);
}

TEST(Verify, QuickStructuralCriteriaPass) {
    const auto report = verify_all(5, quick({5, 6, 8, 9}));
    ASSERT_EQ(report.criteria.size(), 4u);
    for (const auto& c : report.criteria) EXPECT_TRUE(c.pass) << summary_line(c);
    EXPECT_TRUE(report.pass());
    const auto j = to_json(report);
    EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 5u);
    EXPECT_EQ(j.at("criteria").size(), 4u);
    EXPECT_EQ(summary_line(report.criteria[0]).rfind("[PASS] criterion 5 ", 0), 0u);
}

TEST(Verify, InjectedVoteFaultIsCaught) {
    auto o = quick({5});
    o.vote_tie = VoteTie::LabelZero;
    const auto r = run_criterion(5, 5, o);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(summary_line(r).rfind("[FAIL] criterion 5 ", 0), 0u);
}

TEST(Verify, SameSeedSameReport) {
    const auto a = run_criterion(6, 11, quick({}));
    const auto b = run_criterion(6, 11, quick({}));
    EXPECT_EQ(a.pass, b.pass);
    EXPECT_EQ(a.detail, b.detail);
    EXPECT_EQ(a.data, b.data);
}

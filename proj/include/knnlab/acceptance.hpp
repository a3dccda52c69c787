// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "knnlab/knn.hpp"

namespace knnlab {

/// Knobs of the acceptance suite. The defaults are the published settings;
/// smaller values exist so tests can run the same code quickly.
struct VerifyOptions {
    std::vector<std::size_t> n_grid{100, 1000, 10000};
    std::size_t repetitions = 200;
    std::size_t test_draws = 50;
    std::size_t parallelism = 1;
    std::size_t tiebreak_cases = 10000;
    std::size_t nagata_instances = 50;
    std::size_t families_per_size = 100;
    std::size_t max_family_size = 12;
    std::size_t restriction_queries = 100;
    std::vector<std::size_t> reproducibility_parallelism{1, 4, 8};
    /// Criteria to run; empty means all of 1..9.
    std::vector<int> criteria;
    /// Fault injection: the vote convention handed to the rule under test.
    VoteTie vote_tie = VoteTie::LabelOne;
};

/// Throws UsageError on unknown keys or ill-typed values.
VerifyOptions verify_options_from_json(const nlohmann::json& j);

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    nlohmann::json data;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool pass() const;
};

inline constexpr int kCriterionCount = 9;
inline constexpr std::uint64_t kDefaultVerifySeed = 20240611;

std::string criterion_title(int id);

/// Runs one criterion. Throws UsageError for an id outside 1..9.
CriterionResult run_criterion(int id, std::uint64_t seed, const VerifyOptions& options);

VerifyReport verify_all(std::uint64_t seed, const VerifyOptions& options = {});

nlohmann::json to_json(const VerifyReport& report);

/// "[PASS] criterion 3 (title): detail [seconds s]".
std::string summary_line(const CriterionResult& result);

}  // namespace knnlab

// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "knnlab/knn.hpp"
#include "knnlab/problems.hpp"

namespace knnlab {

struct ProblemRef {
    std::string name;
    std::map<std::string, double> params;
};

struct ExperimentConfig {
    ProblemRef problem;
    std::vector<std::size_t> n_grid;
    KSchedule schedule = KSchedule::ceil_sqrt();
    TieBreakPolicy policy = TieBreakPolicy::UniformRandomOrder;
    std::size_t repetitions = 200;  // R
    std::size_t test_draws = 50;    // M
    std::uint64_t master_seed = 0;
    std::size_t parallelism = 1;
    std::string output_path;
    /// When false wall_ms is written as 0, making the CSV a pure function of
    /// the config.
    bool record_timing = true;
};

/// Throws UsageError on a malformed or invalid config.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

void validate(const ExperimentConfig& config);

struct ResultRow {
    std::string problem_name;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t R = 0;
    std::size_t M = 0;
    double err_mean = 0.0;
    double err_sem = 0.0;
    double bayes_error = 0.0;
    double excess_risk = 0.0;
    std::int64_t wall_ms = 0;
    std::uint64_t master_seed = 0;

    bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kCsvHeader =
    "problem_name,n,k,R,M,err_mean,err_sem,bayes_error,excess_risk,wall_ms,master_seed";

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_rows(std::istream& in);
std::string rows_to_csv(const std::vector<ResultRow>& rows);

/// One row per grid size. Repetitions of every grid size share one worker
/// pool; each repetition owns its generator substream, so the rows do not
/// depend on parallelism.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// run_experiment followed by writing the CSV to config.output_path.
std::vector<ResultRow> run_and_write(const ExperimentConfig& config);

struct CheckReport {
    bool pass = false;
    std::string detail;
};

/// Pass iff excess risk at the largest n is below tol and excess risk never
/// rises from one grid size to the next by more than twice the standard
/// error at the larger size.
CheckReport check_consistency(std::vector<ResultRow> rows, double tol);

/// 1/3 - exp(-k/18).
double two_valued_error_floor(std::size_t k);

/// Pass iff every row satisfies err_mean >= 1/3 - exp(-k/18) - 3 err_sem.
CheckReport check_chernoff_bound(const std::vector<ResultRow>& rows);

/// A subset Y of a problem's space together with an isometric copy of Y as a
/// space of its own.
struct Subspace {
    std::string name;
    std::function<bool(const PointCode&)> contains;
    SpaceSpec intrinsic;
    std::function<PointCode(const PointCode&)> to_intrinsic;
};

Subspace whole_space(const LearningProblem& problem);
/// The nonzero grid atoms of the cerou_guyader problem, seen as a two-valued
/// space with r = 2 (atom i/M maps to index i - 1).
Subspace cg_nonzero_atoms(const LearningProblem& problem);
/// One spine of a hedgehog problem, seen as the unit interval of the real line.
Subspace hedgehog_spine(const LearningProblem& problem, std::int64_t spine);

struct RestrictionReport {
    bool pass = false;
    std::size_t agreed = 0;
    std::size_t queries = 0;
};

/// Draws a sample of size n and `queries` query points from mu conditioned on
/// Y, then predicts every query twice, in the ambient space and in the
/// intrinsic copy of Y, from identical generator states.
RestrictionReport restriction_equivalence_test(const LearningProblem& problem, const Subspace& subspace, std::size_t n,
                                               std::size_t k, std::uint64_t seed, std::size_t queries = 100,
                                               TieBreakPolicy policy = TieBreakPolicy::UniformRandomOrder);

}  // namespace knnlab

// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "knnlab/kernels.hpp"
#include "knnlab/problems.hpp"
#include "knnlab/rng.hpp"

namespace knnlab {

enum class TieBreakPolicy {
    /// Sphere ties filled by a uniformly random subset (a random order of the
    /// sample restricted to the sphere).
    UniformRandomOrder,
    /// Sphere ties filled in original sample order.
    IndexOrder,
};

std::string to_string(TieBreakPolicy policy);
TieBreakPolicy policy_from_string(const std::string& name);

/// Label returned on a split vote.
enum class VoteTie { LabelOne, LabelZero };

struct KSchedule {
    enum class Kind { Fixed, CeilSqrt, CeilLog };
    Kind kind = Kind::CeilSqrt;
    std::size_t fixed_k = 1;

    static KSchedule fixed(std::size_t k) { return {Kind::Fixed, k}; }
    static KSchedule ceil_sqrt() { return {Kind::CeilSqrt, 0}; }
    static KSchedule ceil_log() { return {Kind::CeilLog, 0}; }

    /// k for a sample of size n; always in [1, n]. Fixed(k) with k > n throws.
    std::size_t k_for(std::size_t n) const;
    std::string describe() const;
};

struct NeighborSet {
    std::vector<std::size_t> indices;  // ascending
    double radius = 0.0;
};

/// Labelled sample packed for repeated queries.
class TrainingSet {
public:
    TrainingSet(const SpaceSpec& spec, const LabeledSample& sample);
    TrainingSet(const SpaceSpec& spec, std::span<const PointCode> points, std::vector<std::uint8_t> labels);

    const SpaceSpec& spec() const { return points_.spec(); }
    std::size_t size() const { return points_.size(); }
    const PackedPoints& points() const { return points_; }
    int label(std::size_t i) const { return labels_[i]; }

private:
    PackedPoints points_;
    std::vector<std::uint8_t> labels_;
};

/// Scratch buffers reused across queries by one thread.
struct KnnWorkspace {
    std::vector<double> distances;
    std::vector<double> order_scratch;
    std::vector<std::size_t> sphere;
};

/// Smallest r >= 0 with at least k sample points in the closed ball B(x, r),
/// i.e. the k-th smallest sample distance.
double knn_radius(const SpaceSpec& spec, const std::vector<PointCode>& sample_points, const PointCode& x, std::size_t k);

NeighborSet select_neighbors(const TrainingSet& sample, const PointCode& x, std::size_t k, TieBreakPolicy policy,
                             Rng& rng, KnnWorkspace& ws, const KernelTable& kernels = active_kernels());

NeighborSet select_neighbors(const SpaceSpec& spec, const LabeledSample& sample, const PointCode& x, std::size_t k,
                             TieBreakPolicy policy, Rng& rng);

/// Heaviside majority vote over the selected neighbours: 1 iff the mean label
/// is >= 1/2 (a split vote goes to the tie label, 1 by default).
int predict(const TrainingSet& sample, const PointCode& x, std::size_t k, TieBreakPolicy policy, Rng& rng,
            KnnWorkspace& ws, VoteTie tie = VoteTie::LabelOne, const KernelTable& kernels = active_kernels());

int predict(const SpaceSpec& spec, const LabeledSample& sample, const PointCode& x, std::size_t k, TieBreakPolicy policy,
            Rng& rng, VoteTie tie = VoteTie::LabelOne);

/// Applies the vote rule to a label sum over k neighbours.
int heaviside_vote(std::size_t ones, std::size_t k, VoteTie tie = VoteTie::LabelOne);

struct ErrorEstimate {
    std::size_t k = 0;
    double err_mean = 0.0;
    double err_sem = 0.0;
    std::vector<double> per_repetition;
};

struct EstimateOptions {
    std::size_t repetitions = 200;
    std::size_t test_draws = 50;
    std::size_t parallelism = 1;
    VoteTie tie = VoteTie::LabelOne;
};

/// Generator for one repetition: substream(master_seed, problem, n, repetition).
Rng repetition_stream(std::uint64_t master_seed, const std::string& problem_name, std::size_t n, std::size_t repetition);

/// Misclassification rate of one repetition: draw a sample of size n and
/// test_draws fresh labelled pairs, all from rng, and score predictions.
double repetition_error(const LearningProblem& problem, std::size_t n, std::size_t k, TieBreakPolicy policy,
                        std::size_t test_draws, Rng& rng, VoteTie tie = VoteTie::LabelOne);

/// Monte Carlo estimate of P[L_n(sigma)(X) != Y] with its standard error
/// over repetitions. Deterministic in master_seed for any parallelism.
ErrorEstimate estimate_error(const LearningProblem& problem, std::size_t n, const KSchedule& schedule,
                             TieBreakPolicy policy, std::uint64_t master_seed, const EstimateOptions& options);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; the first exception is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Mean and standard error of the mean, summed in index order.
std::pair<double, double> mean_and_sem(std::span<const double> values);

}  // namespace knnlab

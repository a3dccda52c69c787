// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include "knnlab/knn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "knnlab/error.hpp"

namespace knnlab {

std::string to_string(TieBreakPolicy policy) {
    return policy == TieBreakPolicy::UniformRandomOrder ? "uniform_random_order" : "index_order";
}

TieBreakPolicy policy_from_string(const std::string& name) {
    if (name == "uniform_random_order") return TieBreakPolicy::UniformRandomOrder;
    if (name == "index_order") return TieBreakPolicy::IndexOrder;
    throw UsageError("unknown tie-break policy '" + name + "'");
}

std::size_t KSchedule::k_for(std::size_t n) const {
    if (n == 0) throw UsageError("k schedule needs n >= 1");
    switch (kind) {
        case Kind::Fixed:
            if (fixed_k < 1 || fixed_k > n)
                throw UsageError("fixed k = " + std::to_string(fixed_k) + " outside [1, n = " + std::to_string(n) + "]");
            return fixed_k;
        case Kind::CeilSqrt: {
            auto s = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
            while (s * s > n) --s;
            while (s * s < n) ++s;
            return std::min(std::max<std::size_t>(s, 1), n);
        }
        case Kind::CeilLog: {
            const auto k = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n)))) + 1;
            return std::min(k, n);
        }
    }
    return 1;
}

std::string KSchedule::describe() const {
    switch (kind) {
        case Kind::Fixed: return "fixed(" + std::to_string(fixed_k) + ")";
        case Kind::CeilSqrt: return "ceil_sqrt";
        case Kind::CeilLog: return "ceil_log";
    }
    return "?";
}

namespace {

std::vector<std::uint8_t> labels_of(const LabeledSample& sample) {
    std::vector<std::uint8_t> labels;
    labels.reserve(sample.size());
    for (const auto& lp : sample.pairs) {
        if (lp.label != 0 && lp.label != 1) throw UsageError("labels must be 0 or 1");
        labels.push_back(static_cast<std::uint8_t>(lp.label));
    }
    return labels;
}

std::vector<PointCode> points_of(const LabeledSample& sample) {
    std::vector<PointCode> pts;
    pts.reserve(sample.size());
    for (const auto& lp : sample.pairs) pts.push_back(lp.point);
    return pts;
}

void check_k(std::size_t k, std::size_t n) {
    if (n == 0) throw UsageError("empty sample");
    if (k < 1 || k > n) throw UsageError("k = " + std::to_string(k) + " outside [1, n = " + std::to_string(n) + "]");
}

double kth_smallest(std::span<const double> d, std::size_t k, std::vector<double>& scratch) {
    scratch.assign(d.begin(), d.end());
    auto kth = scratch.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(scratch.begin(), kth, scratch.end());
    return *kth;
}

}  // namespace

TrainingSet::TrainingSet(const SpaceSpec& spec, const LabeledSample& sample) {
    const auto pts = points_of(sample);
    points_ = PackedPoints(spec, pts);
    labels_ = labels_of(sample);
}

TrainingSet::TrainingSet(const SpaceSpec& spec, std::span<const PointCode> points, std::vector<std::uint8_t> labels)
    : points_(spec, points), labels_(std::move(labels)) {
    if (labels_.size() != points_.size()) throw UsageError("label count does not match point count");
    for (auto l : labels_)
        if (l > 1) throw UsageError("labels must be 0 or 1");
}

double knn_radius(const SpaceSpec& spec, const std::vector<PointCode>& sample_points, const PointCode& x, std::size_t k) {
    check_k(k, sample_points.size());
    const PackedPoints packed(spec, sample_points);
    std::vector<double> d(packed.size());
    packed.distances_to(x, d);
    std::vector<double> scratch;
    return kth_smallest(d, k, scratch);
}

NeighborSet select_neighbors(const TrainingSet& sample, const PointCode& x, std::size_t k, TieBreakPolicy policy,
                             Rng& rng, KnnWorkspace& ws, const KernelTable& kernels) {
    const std::size_t n = sample.size();
    check_k(k, n);
    ws.distances.resize(n);
    sample.points().distances_to(x, ws.distances, kernels);
    const double radius = kth_smallest(ws.distances, k, ws.order_scratch);

    std::size_t below = 0, on_sphere = 0;
    kernels.count_below_equal(ws.distances.data(), n, radius, &below, &on_sphere);

    NeighborSet out;
    out.radius = radius;
    out.indices.reserve(k);
    ws.sphere.clear();
    ws.sphere.reserve(on_sphere);
    for (std::size_t i = 0; i < n; ++i) {
        if (ws.distances[i] < radius)
            out.indices.push_back(i);
        else if (ws.distances[i] == radius)
            ws.sphere.push_back(i);
    }
    const std::size_t need = k - below;
    if (policy == TieBreakPolicy::UniformRandomOrder && ws.sphere.size() > need) {
        // First `need` steps of a Fisher-Yates shuffle: a uniform need-subset.
        for (std::size_t i = 0; i < need; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(ws.sphere.size() - i));
            std::swap(ws.sphere[i], ws.sphere[j]);
        }
    }
    out.indices.insert(out.indices.end(), ws.sphere.begin(), ws.sphere.begin() + static_cast<std::ptrdiff_t>(need));
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

NeighborSet select_neighbors(const SpaceSpec& spec, const LabeledSample& sample, const PointCode& x, std::size_t k,
                             TieBreakPolicy policy, Rng& rng) {
    const TrainingSet ts(spec, sample);
    KnnWorkspace ws;
    return select_neighbors(ts, x, k, policy, rng, ws);
}

int heaviside_vote(std::size_t ones, std::size_t k, VoteTie tie) {
    if (2 * ones > k) return 1;
    if (2 * ones < k) return 0;
    return tie == VoteTie::LabelOne ? 1 : 0;
}

int predict(const TrainingSet& sample, const PointCode& x, std::size_t k, TieBreakPolicy policy, Rng& rng,
            KnnWorkspace& ws, VoteTie tie, const KernelTable& kernels) {
    const auto neighbors = select_neighbors(sample, x, k, policy, rng, ws, kernels);
    std::size_t ones = 0;
    for (auto i : neighbors.indices) ones += static_cast<std::size_t>(sample.label(i));
    return heaviside_vote(ones, k, tie);
}

int predict(const SpaceSpec& spec, const LabeledSample& sample, const PointCode& x, std::size_t k, TieBreakPolicy policy,
            Rng& rng, VoteTie tie) {
    const TrainingSet ts(spec, sample);
    KnnWorkspace ws;
    return predict(ts, x, k, policy, rng, ws, tie);
}

Rng repetition_stream(std::uint64_t master_seed, const std::string& problem_name, std::size_t n, std::size_t repetition) {
    return Rng::substream(master_seed, {hash_label(problem_name), static_cast<std::uint64_t>(n),
                                        static_cast<std::uint64_t>(repetition)});
}

double repetition_error(const LearningProblem& problem, std::size_t n, std::size_t k, TieBreakPolicy policy,
                        std::size_t test_draws, Rng& rng, VoteTie tie) {
    if (test_draws < 1) throw UsageError("need at least one test draw");
    const auto sample = draw_sample(problem, rng, n);
    const TrainingSet ts(problem.spec, sample);
    KnnWorkspace ws;
    std::size_t mistakes = 0;
    for (std::size_t m = 0; m < test_draws; ++m) {
        const auto test = draw_labeled(problem, rng);
        mistakes += predict(ts, test.point, k, policy, rng, ws, tie) != test.label;
    }
    return static_cast<double>(mistakes) / static_cast<double>(test_draws);
}

ErrorEstimate estimate_error(const LearningProblem& problem, std::size_t n, const KSchedule& schedule,
                             TieBreakPolicy policy, std::uint64_t master_seed, const EstimateOptions& options) {
    if (options.repetitions < 2) throw UsageError("need at least 2 repetitions");
    if (options.test_draws < 1) throw UsageError("need at least one test draw");
    validate(problem);
    ErrorEstimate est;
    est.k = schedule.k_for(n);
    est.per_repetition.assign(options.repetitions, 0.0);
    parallel_for(options.repetitions, options.parallelism, [&](std::size_t r) {
        Rng rng = repetition_stream(master_seed, problem.name, n, r);
        est.per_repetition[r] = repetition_error(problem, n, est.k, policy, options.test_draws, rng, options.tie);
    });
    std::tie(est.err_mean, est.err_sem) = mean_and_sem(est.per_repetition);
    return est;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        const std::size_t n_workers = std::min(threads, count);
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) return;
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next.store(count);
                        return;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::pair<double, double> mean_and_sem(std::span<const double> values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

}  // namespace knnlab

// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fixtures.hpp"
#include "knnlab/error.hpp"
#include "knnlab/knn.hpp"
#include "oracles.hpp"

using namespace knnlab;

namespace {

LabeledSample labelled(const std::vector<PointCode>& pts, const std::vector<int>& labels) {
    LabeledSample s;
    for (std::size_t i = 0; i < pts.size(); ++i) s.pairs.push_back({pts[i], labels[i]});
    return s;
}

std::vector<PointCode> line(const std::vector<double>& xs) {
    std::vector<PointCode> out;
    for (double x : xs) out.push_back(EuclideanPoint{{x}});
    return out;
}

}  // namespace

TEST(KSchedule, Values) {
    EXPECT_EQ(KSchedule::ceil_sqrt().k_for(1), 1u);
    EXPECT_EQ(KSchedule::ceil_sqrt().k_for(100), 10u);
    EXPECT_EQ(KSchedule::ceil_sqrt().k_for(101), 11u);
    EXPECT_EQ(KSchedule::ceil_sqrt().k_for(10000), 100u);
    EXPECT_EQ(KSchedule::ceil_log().k_for(1), 1u);
    EXPECT_EQ(KSchedule::ceil_log().k_for(100), 6u);
    EXPECT_EQ(KSchedule::fixed(3).k_for(3), 3u);
    EXPECT_THROW(KSchedule::fixed(4).k_for(3), UsageError);
    EXPECT_THROW(KSchedule::fixed(0).k_for(3), UsageError);
    EXPECT_THROW(KSchedule::ceil_sqrt().k_for(0), UsageError);
}

TEST(KSchedule, SqrtIsExactForLargeSquares) {
    for (std::size_t s : {3037000499ull / 1000, 99999ull, 123456ull}) {
        EXPECT_EQ(KSchedule::ceil_sqrt().k_for(s * s), s);
        EXPECT_EQ(KSchedule::ceil_sqrt().k_for(s * s + 1), s + 1);
    }
}

TEST(Policy, NamesRoundTrip) {
    for (auto p : {TieBreakPolicy::UniformRandomOrder, TieBreakPolicy::IndexOrder})
        EXPECT_EQ(policy_from_string(to_string(p)), p);
    EXPECT_THROW(policy_from_string("random"), UsageError);
}

TEST(Vote, HeavisideWithSplitConvention) {
    EXPECT_EQ(heaviside_vote(2, 4), 1);
    EXPECT_EQ(heaviside_vote(2, 4, VoteTie::LabelZero), 0);
    EXPECT_EQ(heaviside_vote(1, 4), 0);
    EXPECT_EQ(heaviside_vote(3, 5, VoteTie::LabelZero), 1);
    EXPECT_EQ(heaviside_vote(2, 5), 0);
}

TEST(Select, StrictlyCloserPointsAlwaysWin) {
    const SpaceSpec spec = EuclideanSpace{1};
    const auto s = labelled(line({5, 1, 2, 3, -1}), {0, 0, 0, 0, 0});
    Rng rng(1);
    const auto set = select_neighbors(spec, s, EuclideanPoint{{1.9}}, 2, TieBreakPolicy::UniformRandomOrder, rng);
    EXPECT_EQ(set.indices, (std::vector<std::size_t>{1, 2}));
    EXPECT_DOUBLE_EQ(set.radius, 0.9);
    EXPECT_DOUBLE_EQ(knn_radius(spec, {EuclideanPoint{{5}}, EuclideanPoint{{1}}}, EuclideanPoint{{0}}, 2), 5.0);
}

TEST(Select, KBeyondSampleSizeThrows) {
    const SpaceSpec spec = EuclideanSpace{1};
    const auto s = labelled(line({0, 1}), {0, 1});
    Rng rng(1);
    EXPECT_THROW(select_neighbors(spec, s, EuclideanPoint{{0}}, 3, TieBreakPolicy::IndexOrder, rng), UsageError);
    EXPECT_THROW(select_neighbors(spec, s, EuclideanPoint{{0}}, 0, TieBreakPolicy::IndexOrder, rng), UsageError);
}

TEST(Select, IndexOrderTakesTheEarliestTies) {
    // Two-valued space: every other point is at distance r, so the sphere is everything.
    const SpaceSpec spec = TwoValuedSpace{10, 1.0};
    std::vector<PointCode> pts;
    for (std::int64_t i = 1; i <= 6; ++i) pts.push_back(DiscretePoint{i});
    const auto s = labelled(pts, {0, 0, 0, 1, 1, 1});
    Rng rng(3);
    const Rng before = rng;
    const auto set = select_neighbors(spec, s, DiscretePoint{0}, 3, TieBreakPolicy::IndexOrder, rng);
    EXPECT_EQ(set.indices, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_TRUE(rng == before);
    EXPECT_EQ(predict(spec, s, DiscretePoint{0}, 3, TieBreakPolicy::IndexOrder, rng), 0);
}

TEST(Select, UniformOrderDrawsEverySubsetEquallyOften) {
    const SpaceSpec spec = TwoValuedSpace{10, 1.0};
    std::vector<PointCode> pts;
    for (std::int64_t i = 1; i <= 5; ++i) pts.push_back(DiscretePoint{i});
    const auto s = labelled(pts, {0, 0, 0, 0, 0});
    Rng rng(5);
    std::map<std::vector<std::size_t>, int> counts;
    const int R = 50000;
    for (int i = 0; i < R; ++i)
        ++counts[select_neighbors(spec, s, DiscretePoint{0}, 2, TieBreakPolicy::UniformRandomOrder, rng).indices];
    ASSERT_EQ(counts.size(), 10u);  // C(5,2)
    const double e = R / 10.0;
    for (const auto& [subset, c] : counts) EXPECT_NEAR(c, e, 5 * std::sqrt(e)) << subset[0] << "," << subset[1];
}

TEST(Select, MixedInteriorAndSphere) {
    // Query at 0 on a line: 0 is interior, the two points at distance 1 tie for the last slot.
    const SpaceSpec spec = EuclideanSpace{1};
    const auto s = labelled(line({1, 0, -1, 4}), {1, 0, 0, 1});
    Rng rng(7);
    int first = 0;
    const int R = 20000;
    for (int i = 0; i < R; ++i) {
        const auto set = select_neighbors(spec, s, EuclideanPoint{{0}}, 2, TieBreakPolicy::UniformRandomOrder, rng);
        ASSERT_EQ(set.indices.size(), 2u);
        ASSERT_TRUE(set.indices == (std::vector<std::size_t>{0, 1}) || set.indices == (std::vector<std::size_t>{1, 2}));
        first += set.indices[0] == 0;
    }
    EXPECT_NEAR(first, R / 2.0, 5 * std::sqrt(R / 4.0));
}

TEST(Predict, SplitVoteGoesToLabelOne) {
    const SpaceSpec spec = EuclideanSpace{1};
    const auto s = labelled(line({1, -1, 5}), {1, 0, 0});
    Rng rng(1);
    EXPECT_EQ(predict(spec, s, EuclideanPoint{{0}}, 2, TieBreakPolicy::IndexOrder, rng), 1);
    EXPECT_EQ(predict(spec, s, EuclideanPoint{{0}}, 2, TieBreakPolicy::IndexOrder, rng, VoteTie::LabelZero), 0);
}

TEST(Select, RandomCasesAgreeWithOracleOnEveryIsa) {
    for (std::uint64_t trial = 0; trial < 400; ++trial) {
        Rng rng = Rng::substream(99, {trial});
        const auto spec = fixture::random_space(rng);
        const std::size_t n = 1 + rng.uniform_index(30);
        std::vector<PointCode> pts;
        for (std::size_t i = 0; i < n; ++i) pts.push_back(fixture::random_point(spec, rng));
        std::vector<int> labels(n);
        for (auto& l : labels) l = rng.bernoulli(0.5) ? 1 : 0;
        const auto s = labelled(pts, labels);
        const auto x = fixture::random_point(spec, rng);
        const std::size_t k = 1 + rng.uniform_index(n);
        const TrainingSet ts(spec, s);
        KnnWorkspace ws;
        for (const auto isa : available_isas()) {
            for (auto policy : {TieBreakPolicy::UniformRandomOrder, TieBreakPolicy::IndexOrder}) {
                Rng r = rng;
                const auto set = select_neighbors(ts, x, k, policy, r, ws, kernels_for(isa));
                EXPECT_EQ(oracle::knn_selection_defect(spec, pts, x, k, set), "") << describe(spec);
                EXPECT_EQ(set.radius, oracle::sorted_kth_distance(spec, pts, x, k));
            }
        }
    }
}

TEST(Estimate, ConstantOneHasZeroError) {
    const auto p = problem_constant(1.0);
    EstimateOptions o;
    o.repetitions = 20;
    o.test_draws = 30;
    const auto e = estimate_error(p, 50, KSchedule::fixed(1), TieBreakPolicy::UniformRandomOrder, 1, o);
    EXPECT_EQ(e.k, 1u);
    EXPECT_EQ(e.err_mean, 0.0);
    EXPECT_EQ(e.err_sem, 0.0);
}

TEST(Estimate, IndependentOfParallelism) {
    const auto p = problem_euclidean_linear();
    EstimateOptions o;
    o.repetitions = 37;
    o.test_draws = 20;
    const auto a = estimate_error(p, 200, KSchedule::ceil_sqrt(), TieBreakPolicy::UniformRandomOrder, 123, o);
    for (std::size_t threads : {2u, 3u, 8u}) {
        o.parallelism = threads;
        const auto b = estimate_error(p, 200, KSchedule::ceil_sqrt(), TieBreakPolicy::UniformRandomOrder, 123, o);
        EXPECT_EQ(a.per_repetition, b.per_repetition);
        EXPECT_EQ(a.err_mean, b.err_mean);
        EXPECT_EQ(a.err_sem, b.err_sem);
    }
}

TEST(Estimate, KLargerThanNThrows) {
    EstimateOptions o;
    o.repetitions = 2;
    EXPECT_THROW(estimate_error(problem_euclidean_linear(), 5, KSchedule::fixed(6), TieBreakPolicy::IndexOrder, 0, o),
                 UsageError);
}

TEST(ParallelFor, VisitsEveryIndexOnceAndRethrows) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 6, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_THROW(parallel_for(100, 4,
                              [](std::size_t i) {
                                  if (i == 57) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(MeanAndSem, SmallExample) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto [m, s] = mean_and_sem(v);
    EXPECT_DOUBLE_EQ(m, 2.5);
    EXPECT_NEAR(s, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

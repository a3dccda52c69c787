// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <limits>

#include "fixtures.hpp"
#include "knnlab/error.hpp"
#include "knnlab/nagata.hpp"
#include "oracles.hpp"

using namespace knnlab;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct LineCase {
    FiniteMetricInstance instance;
    LineSweep sweep;
};

LineCase line_points(const std::vector<double>& xs) {
    LineCase c;
    std::vector<PointCode> pts;
    for (double x : xs) {
        pts.push_back(EuclideanPoint{{x}});
        c.sweep.coords.push_back(x);
    }
    c.instance = materialize(EuclideanSpace{1}, pts);
    return c;
}

std::vector<std::size_t> all_points(const FiniteMetricInstance& inst) {
    std::vector<std::size_t> X(inst.size());
    for (std::size_t i = 0; i < X.size(); ++i) X[i] = i;
    return X;
}

}  // namespace

TEST(Multiplicity, FiniteAndSweepDiffer) {
    const auto c = line_points({0, 2});
    const BallFamily f{{{0, 1.5}, {1, 1.5}}, std::numeric_limits<double>::infinity(), {}};
    EXPECT_EQ(multiplicity(c.instance, f, FinitePoints{}), 1);
    EXPECT_EQ(multiplicity(c.instance, f, c.sweep), 2);
    // Closed balls touching at a single point still overlap.
    const BallFamily touching{{{0, 1.0}, {1, 1.0}}, std::numeric_limits<double>::infinity(), {}};
    EXPECT_EQ(multiplicity(c.instance, touching, c.sweep), 2);
    // Repeated balls count once.
    const BallFamily twice{{{0, 1.0}, {0, 1.0}}, std::numeric_limits<double>::infinity(), {}};
    EXPECT_EQ(multiplicity(c.instance, twice, c.sweep), 1);
}

TEST(Certificate, FoundSubfamiliesValidate) {
    const auto c = line_points({0, 1, 2, 3});
    const BallFamily f{{{0, 1}, {1, 1}, {2, 1}, {3, 1}}, std::numeric_limits<double>::infinity(), {}};
    const auto cert = find_subfamily(c.instance, f, 1, c.sweep);
    ASSERT_TRUE(cert);
    EXPECT_TRUE(validate_certificate(c.instance, f, 1, c.sweep, *cert));
    EXPECT_LE(cert->multiplicity, 2);
    // The bogus certificate that drops a needed ball is rejected.
    EXPECT_FALSE(validate_certificate(c.instance, f, 1, c.sweep, Certificate{{0}, 1}));
}

TEST(Family, ValidationRejectsBadBalls) {
    const auto c = line_points({0, 1, 2});
    BallFamily f{{{0, 0.5}}, 1.0, {0, 1}};
    EXPECT_NO_THROW(validate_family(c.instance, f));
    f.balls.push_back({2, 0.1});
    EXPECT_THROW(validate_family(c.instance, f), UsageError);
    f.balls.back() = {1, 1.0};
    EXPECT_THROW(validate_family(c.instance, f), UsageError);
    f.balls.back() = {1, -0.1};
    EXPECT_THROW(validate_family(c.instance, f), UsageError);
}

TEST(Family, JsonRoundTrip) {
    const BallFamily f{{{0, 0.25}, {2, 1.5}}, 2.0, {0, 2}};
    const auto back = family_from_json(to_json(f));
    EXPECT_EQ(back.balls, f.balls);
    EXPECT_EQ(back.scale, f.scale);
    EXPECT_EQ(back.centers_subset, f.centers_subset);
    const BallFamily g{{{1, 3.0}}, std::numeric_limits<double>::infinity(), {}};
    EXPECT_EQ(family_from_json(to_json(g)).scale, inf);
    EXPECT_THROW(family_from_json(nlohmann::json::parse(R"({"balls": [], "extra": 1})")), UsageError);
    EXPECT_THROW(family_from_json(nlohmann::json::parse(R"({"balls": [{"center": -1, "radius": 1}]})")), UsageError);
}

TEST(Witness, ValidationCatchesWrongGeometry) {
    auto c = line_points({0, 1, 3});
    EXPECT_NO_THROW(validate_witness(c.instance, c.sweep));
    c.sweep.coords[2] = 4;
    EXPECT_THROW(validate_witness(c.instance, c.sweep), UsageError);
    c.sweep.coords.pop_back();
    EXPECT_THROW(validate_witness(c.instance, c.sweep), UsageError);
}

TEST(Capacity, LargeFamiliesNeedTheHeuristic) {
    const auto c = line_points({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    BallFamily f;
    for (std::size_t i = 0; i < 21; ++i) f.balls.push_back({i % 10, 0.5 + 0.01 * static_cast<double>(i)});
    EXPECT_THROW(find_subfamily(c.instance, f, 1, c.sweep), CapacityError);
    const auto cert = find_subfamily(c.instance, f, 1, c.sweep, true);
    if (cert) {
        EXPECT_TRUE(validate_certificate(c.instance, f, 1, c.sweep, *cert));
    }
    EXPECT_THROW(check_dim_at_scale(c.instance, all_points(c.instance), 1, inf, Exhaustive{}, c.sweep), CapacityError);
}

TEST(DimAtScale, TwoValuedHasDimensionZeroBelowR) {
    std::vector<PointCode> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(DiscretePoint{i});
    const auto inst = materialize(TwoValuedSpace{5, 2.0}, pts);
    const auto v = check_dim_at_scale(inst, all_points(inst), 0, 2.0, Exhaustive{});
    EXPECT_TRUE(v.holds);
    EXPECT_TRUE(v.exhaustive);
    EXPECT_GT(v.families_checked, 0u);
}

TEST(DimAtScale, LineHasDimensionOneButNotZero) {
    const auto c = line_points({0, 1, 2, 3, 4});
    EXPECT_TRUE(check_dim_at_scale(c.instance, all_points(c.instance), 1, inf, Exhaustive{}, c.sweep).holds);
    const auto zero = check_dim_at_scale(c.instance, all_points(c.instance), 0, inf, Exhaustive{}, c.sweep);
    ASSERT_FALSE(zero.holds);
    ASSERT_TRUE(zero.counterexample);
    EXPECT_FALSE(oracle::covering_subfamily_exists(c.instance, *zero.counterexample, 0, c.sweep));
}

TEST(DimAtScale, SweepUsesRadiiJustBelowTheNextDistance) {
    // Realized radii alone (0 here) never make the two balls meet; a radius
    // just under 3 does, on the continuum but at no instance point.
    const auto c = line_points({0, 3});
    const auto sweep = check_dim_at_scale(c.instance, {0, 1}, 0, inf, Exhaustive{}, c.sweep);
    ASSERT_FALSE(sweep.holds);
    EXPECT_FALSE(oracle::covering_subfamily_exists(c.instance, *sweep.counterexample, 0, c.sweep));
    EXPECT_TRUE(check_dim_at_scale(c.instance, {0, 1}, 0, inf, Exhaustive{}).holds);
}

TEST(DimAtScale, UltrametricsHaveDimensionZero) {
    Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        const auto inst = fixture::random_ultrametric(6, rng);
        ASSERT_TRUE(is_strong_triangle(inst));
        EXPECT_TRUE(check_dim_at_scale(inst, all_points(inst), 0, inf, Exhaustive{}).holds);
    }
}

TEST(DimAtScale, RandomizedCounterexamplesAreGenuine) {
    const auto c = line_points({0, 1, 2, 3, 4, 5});
    const auto v = check_dim_at_scale(c.instance, all_points(c.instance), 0, inf, Randomized{500, 3}, c.sweep);
    EXPECT_FALSE(v.exhaustive);
    if (!v.holds) {
        EXPECT_FALSE(find_subfamily(c.instance, *v.counterexample, 0, c.sweep));
    }
}

TEST(Greedy, SoundOnUltrametrics) {
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto inst = fixture::random_ultrametric(7, rng);
        const auto f = fixture::random_family(inst, 1 + rng.uniform_index(10), rng);
        const auto g = greedy_subfamily(inst, f, 0, FinitePoints{});
        if (g) {
            EXPECT_TRUE(validate_certificate(inst, f, 0, FinitePoints{}, *g));
        }
        if (g) {
            EXPECT_TRUE(find_subfamily(inst, f, 0, FinitePoints{}));
        }
    }
}

TEST(Search, AgreesWithAllSubsetsOracle) {
    Rng rng(12);
    for (std::size_t trial = 0; trial < 600; ++trial) {
        const auto t = fixture::random_instance(trial, 3 + rng.uniform_index(5), rng);
        const auto f = fixture::random_family(t.instance, 1 + rng.uniform_index(9), rng);
        const int delta = static_cast<int>(rng.uniform_index(3));
        const auto cert = find_subfamily(t.instance, f, delta, t.witness);
        EXPECT_EQ(cert.has_value(), oracle::covering_subfamily_exists(t.instance, f, delta, t.witness)) << t.kind;
        if (cert) {
            EXPECT_TRUE(validate_certificate(t.instance, f, delta, t.witness, *cert)) << t.kind;
        }
        std::vector<std::size_t> every(f.balls.size());
        for (std::size_t i = 0; i < every.size(); ++i) every[i] = i;
        EXPECT_EQ(multiplicity(t.instance, f, t.witness), oracle::pointwise_multiplicity(t.instance, f, every, t.witness))
            << t.kind;
    }
}

TEST(Search, SweepDominatesInstancePoints) {
    // The continuum contains the instance points, so its multiplicity is never smaller.
    Rng rng(21);
    for (std::size_t trial = 0; trial < 200; ++trial) {
        const auto t = fixture::random_instance(trial % 2 == 0 ? 1 : 4, 6, rng);
        ASSERT_FALSE(std::holds_alternative<FinitePoints>(t.witness));
        const auto f = fixture::random_family(t.instance, 1 + rng.uniform_index(8), rng);
        EXPECT_GE(multiplicity(t.instance, f, t.witness), multiplicity(t.instance, f, FinitePoints{}));
    }
}

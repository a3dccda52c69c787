// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "knnlab/error.hpp"
#include "knnlab/space.hpp"

using namespace knnlab;

namespace {

FiniteMetricInstance from_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return {rows.size(), flat};
}

}  // namespace

TEST(Distance, CerouGuyaderCases) {
    const SpaceSpec cg = CGIntervalSpace{};
    EXPECT_EQ(distance(cg, UnitIntervalPoint{0.0}, UnitIntervalPoint{0.5}), 1.0);
    EXPECT_EQ(distance(cg, UnitIntervalPoint{0.3}, UnitIntervalPoint{0.7}), 2.0);
    EXPECT_EQ(distance(cg, UnitIntervalPoint{0.3}, UnitIntervalPoint{0.3}), 0.0);
    // Tiny nonzero values must not be mistaken for zero through underflow of a product.
    EXPECT_EQ(distance(cg, UnitIntervalPoint{1e-200}, UnitIntervalPoint{1e-200 * 3}), 2.0);
}

TEST(Distance, HedgehogGeodesic) {
    const SpaceSpec hh = HedgehogSpace{5};
    EXPECT_DOUBLE_EQ(distance(hh, make_hedgehog_point(3, 0.2), make_hedgehog_point(3, 0.9)), 0.7);
    EXPECT_DOUBLE_EQ(distance(hh, make_hedgehog_point(1, 0.2), make_hedgehog_point(4, 0.5)), 0.7);
    EXPECT_EQ(distance(hh, make_hedgehog_point(1, 0.0), make_hedgehog_point(4, 0.0)), 0.0);
    EXPECT_EQ(make_hedgehog_point(4, 0.0), make_hedgehog_point(0, 0.0));
}

TEST(Distance, HedgehogMatchesShortestPathsThroughTheGlue) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t tau = 1 + static_cast<std::int64_t>(rng.uniform_index(4));
        const SpaceSpec hh = HedgehogSpace{tau};
        std::vector<HedgehogPoint> pts;
        for (int i = 0; i < 6; ++i)
            pts.push_back(make_hedgehog_point(static_cast<std::int64_t>(rng.uniform_index(tau)), rng.uniform01()));
        // Graph: node 0 is the glue, node i+1 is pts[i]; edges along spines only.
        const std::size_t n = pts.size() + 1;
        std::vector<double> d(n * n, 1e9);
        for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            d[(i + 1) * n] = d[i + 1] = pts[i].t;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (pts[i].spine == pts[j].spine) d[(i + 1) * n + j + 1] = std::fabs(pts[i].t - pts[j].t);
        }
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + m] + d[m * n + j]);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j)
                EXPECT_NEAR(distance(hh, pts[i], pts[j]), d[(i + 1) * n + j + 1], 1e-12);
    }
}

TEST(Distance, TwoValuedAndC00AndEuclidean) {
    const SpaceSpec tv = TwoValuedSpace{10, 2.5};
    EXPECT_EQ(distance(tv, DiscretePoint{3}, DiscretePoint{7}), 2.5);
    EXPECT_EQ(distance(tv, DiscretePoint{3}, DiscretePoint{3}), 0.0);
    const SpaceSpec c00 = C00Space{10};
    EXPECT_EQ(distance(c00, make_sparse_point({{0, 1.0}, {4, -2.0}}), make_sparse_point({{4, 1.0}, {7, 0.5}})), 3.0);
    EXPECT_EQ(distance(c00, make_sparse_point({}), make_sparse_point({{2, -4.0}})), 4.0);
    EXPECT_EQ(distance(EuclideanSpace{2}, EuclideanPoint{{0, 0}}, EuclideanPoint{{3, 4}}), 5.0);
}

TEST(Distance, MismatchedPointKindIsUsageError) {
    EXPECT_THROW(distance(CGIntervalSpace{}, DiscretePoint{1}, UnitIntervalPoint{0.5}), UsageError);
    EXPECT_THROW(distance(EuclideanSpace{2}, EuclideanPoint{{1}}, EuclideanPoint{{1, 2}}), UsageError);
    EXPECT_THROW(distance(TwoValuedSpace{3, 1.0}, DiscretePoint{3}, DiscretePoint{0}), UsageError);
    EXPECT_THROW(distance(HedgehogSpace{2}, HedgehogPoint{2, 0.5}, HedgehogPoint{0, 0.5}), UsageError);
    EXPECT_THROW(distance(CGIntervalSpace{}, UnitIntervalPoint{1.5}, UnitIntervalPoint{0.5}), UsageError);
}

TEST(Space, ValidationRejectsBadParameters) {
    EXPECT_THROW(validate(SpaceSpec{EuclideanSpace{0}}), UsageError);
    EXPECT_THROW(validate(SpaceSpec{TwoValuedSpace{1, 1.0}}), UsageError);
    EXPECT_THROW(validate(SpaceSpec{TwoValuedSpace{4, 0.0}}), UsageError);
    EXPECT_THROW(validate(SpaceSpec{HedgehogSpace{0}}), UsageError);
    EXPECT_THROW(make_sparse_point({{1, 1.0}, {1, 2.0}}), UsageError);
}

TEST(Materialize, CerouGuyaderExample) {
    const auto inst = materialize(CGIntervalSpace{}, {UnitIntervalPoint{0}, UnitIntervalPoint{0.4}, UnitIntervalPoint{0.8}});
    EXPECT_EQ(inst.matrix(), (std::vector<double>{0, 1, 1, 1, 0, 2, 1, 2, 0}));
    EXPECT_FALSE(is_strong_triangle(inst));
    const auto single = materialize(CGIntervalSpace{}, {UnitIntervalPoint{0.4}});
    EXPECT_EQ(single.size(), 1u);
    EXPECT_EQ(single(0, 0), 0.0);
}

TEST(Materialize, MatchesPairwiseCalls) {
    const SpaceSpec hh = HedgehogSpace{3};
    const std::vector<PointCode> pts{make_hedgehog_point(0, 0.1), make_hedgehog_point(1, 0.7), make_hedgehog_point(2, 0.3),
                                     make_hedgehog_point(1, 0.2)};
    const auto inst = materialize(hh, pts);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(inst(i, i), 0.0);
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_EQ(inst(i, j), inst(j, i));
            EXPECT_EQ(inst(i, j), distance(hh, pts[i], pts[j]));
        }
    }
    EXPECT_THROW(materialize(hh, {make_hedgehog_point(5, 0.5)}), UsageError);
}

TEST(Axioms, ReportsTriangleViolation) {
    const auto bad = from_rows({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
    const auto report = check_metric_axioms(bad);
    EXPECT_FALSE(report.ok);
    EXPECT_EQ(report.kind, AxiomViolation::Triangle);
    ASSERT_TRUE(report.first_violation.has_value());
    EXPECT_EQ(*report.first_violation, (std::array<std::size_t, 3>{0, 1, 2}));
}

TEST(Axioms, ReportsPairwiseDefects) {
    EXPECT_EQ(check_metric_axioms(from_rows({{0, 1}, {2, 0}})).kind, AxiomViolation::Asymmetric);
    EXPECT_EQ(check_metric_axioms(from_rows({{1, 1}, {1, 0}})).kind, AxiomViolation::NonzeroDiagonal);
    EXPECT_EQ(check_metric_axioms(from_rows({{0, -1}, {-1, 0}})).kind, AxiomViolation::Negative);
}

TEST(Axioms, RandomMaterializationsOfEverySpaceAreMetrics) {
    for (std::uint64_t trial = 0; trial < 400; ++trial) {
        Rng rng = Rng::substream(17, {trial});
        const auto spec = fixture::random_space(rng);
        std::vector<PointCode> pts;
        const std::size_t n = 1 + rng.uniform_index(12);
        for (std::size_t i = 0; i < n; ++i) pts.push_back(fixture::random_point(spec, rng));
        const auto report = check_metric_axioms(materialize(spec, pts));
        EXPECT_TRUE(report.ok) << describe(spec);
    }
}

TEST(Axioms, RandomCerouGuyaderInstancesWithContinuousCoordinates) {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<PointCode> pts;
        for (int i = 0; i < 10; ++i) pts.push_back(UnitIntervalPoint{rng.bernoulli(0.3) ? 0.0 : rng.uniform01()});
        EXPECT_TRUE(check_metric_axioms(materialize(CGIntervalSpace{}, pts)).ok);
    }
}

TEST(StrongTriangle, Examples) {
    EXPECT_TRUE(is_strong_triangle(materialize(TwoValuedSpace{5, 1.0}, {DiscretePoint{0}, DiscretePoint{1}, DiscretePoint{4}})));
    EXPECT_FALSE(is_strong_triangle(
        materialize(EuclideanSpace{1}, {EuclideanPoint{{0}}, EuclideanPoint{{1}}, EuclideanPoint{{2}}})));
    Rng rng(1);
    for (int i = 0; i < 20; ++i) EXPECT_TRUE(is_strong_triangle(fixture::random_ultrametric(7, rng)));
}

TEST(MatrixCsv, RoundTripsExactly) {
    Rng rng(5);
    std::vector<PointCode> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(EuclideanPoint{{rng.uniform01(), rng.uniform(-3, 3)}});
    const auto inst = materialize(EuclideanSpace{2}, pts);
    std::stringstream buf;
    write_csv(buf, inst);
    const auto back = read_csv(buf);
    EXPECT_EQ(back.matrix(), inst.matrix());
    EXPECT_EQ(back.size(), 7u);
}

TEST(MatrixCsv, KeepsIdsAndRejectsMalformedInput) {
    std::stringstream good("a,b\n0,1.5\n1.5,0\n");
    const auto inst = read_csv(good);
    EXPECT_EQ(inst.ids(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(inst(0, 1), 1.5);
    std::stringstream ragged("a,b\n0,1\n1\n");
    EXPECT_THROW(read_csv(ragged), UsageError);
    std::stringstream short_rows("a,b\n0,1\n");
    EXPECT_THROW(read_csv(short_rows), UsageError);
    std::stringstream text("a,b\n0,x\n1,0\n");
    EXPECT_THROW(read_csv(text), UsageError);
    std::stringstream empty("");
    EXPECT_THROW(read_csv(empty), UsageError);
}

TEST(Json, SpacesAndPointsRoundTrip) {
    const std::vector<SpaceSpec> specs{EuclideanSpace{3}, CGIntervalSpace{}, TwoValuedSpace{9, 0.5}, HedgehogSpace{4},
                                       C00Space{6}};
    for (const auto& s : specs) EXPECT_EQ(space_from_json(to_json(s)), s);
    const std::vector<PointCode> pts{EuclideanPoint{{0.1, -2}}, UnitIntervalPoint{0.25}, DiscretePoint{4},
                                     make_hedgehog_point(2, 0.75), make_sparse_point({{1, 0.5}, {3, -1}})};
    for (const auto& p : pts) EXPECT_EQ(point_from_json(to_json(p)), p);
    EXPECT_THROW(space_from_json(nlohmann::json{{"kind", "sphere"}}), UsageError);
}

TEST(Numbers, FormatAndParse) {
    for (double v : {0.0, 0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) EXPECT_EQ(parse_double(format_double(v)), v);
    EXPECT_TRUE(std::isinf(parse_double("inf")));
    EXPECT_THROW(parse_double("1.5x"), UsageError);
    EXPECT_THROW(parse_double(""), UsageError);
}

// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <algorithm>
#include <limits>

namespace knnlab::fixture {

SpaceSpec random_space(Rng& rng) {
    switch (rng.uniform_index(5)) {
        case 0: return EuclideanSpace{1 + static_cast<int>(rng.uniform_index(3))};
        case 1: return CGIntervalSpace{};
        case 2: return TwoValuedSpace{2 + static_cast<std::int64_t>(rng.uniform_index(30)), 0.5 + rng.uniform_index(4)};
        case 3: return HedgehogSpace{1 + static_cast<std::int64_t>(rng.uniform_index(4))};
        default: return C00Space{1 + static_cast<std::int64_t>(rng.uniform_index(4))};
    }
}

PointCode random_point(const SpaceSpec& spec, Rng& rng) {
    return std::visit(
        [&](const auto& s) -> PointCode {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, EuclideanSpace>) {
                EuclideanPoint p;
                for (int d = 0; d < s.dim; ++d) p.coords.push_back(static_cast<double>(rng.uniform_index(5)) - 2.0);
                return p;
            } else if constexpr (std::is_same_v<S, CGIntervalSpace>) {
                return UnitIntervalPoint{static_cast<double>(rng.uniform_index(9)) / 8.0};
            } else if constexpr (std::is_same_v<S, TwoValuedSpace>) {
                return DiscretePoint{static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(s.size)))};
            } else if constexpr (std::is_same_v<S, HedgehogSpace>) {
                return make_hedgehog_point(static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(s.spines))),
                                           static_cast<double>(rng.uniform_index(5)) / 4.0);
            } else {
                std::vector<std::pair<std::int64_t, double>> entries;
                for (std::int64_t i = 0; i < s.index_bound; ++i)
                    if (rng.bernoulli(0.5)) entries.emplace_back(i, static_cast<double>(rng.uniform_index(5)) - 2.0);
                return make_sparse_point(std::move(entries));
            }
        },
        spec);
}

FiniteMetricInstance random_ultrametric(std::size_t n, Rng& rng) {
    std::vector<std::pair<int, int>> code;
    for (std::size_t i = 0; i < n; ++i)
        code.emplace_back(static_cast<int>(rng.uniform_index(2)), static_cast<int>(rng.uniform_index(3)));
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) d[i * n + j] = code[i].first != code[j].first ? 3.0 : code[i].second != code[j].second ? 2.0 : 1.0;
    return {n, std::move(d)};
}

FiniteMetricInstance random_graph_metric(std::size_t n, Rng& rng) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n * n, inf);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    auto edge = [&](std::size_t i, std::size_t j) {
        const double w = 1.0 + static_cast<double>(rng.uniform_index(3));
        d[i * n + j] = d[j * n + i] = std::min(d[i * n + j], w);
    };
    for (std::size_t i = 1; i < n; ++i) edge(i, rng.uniform_index(i));
    for (std::size_t e = 0; e < n; ++e) edge(rng.uniform_index(n), rng.uniform_index(n));
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + m] + d[m * n + j]);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    return {n, std::move(d)};
}

TestInstance random_instance(std::size_t which, std::size_t n, Rng& rng) {
    switch (which % 6) {
        case 0: {
            const SpaceSpec spec = TwoValuedSpace{static_cast<std::int64_t>(n), 0.5 * static_cast<double>(1 + rng.uniform_index(4))};
            std::vector<PointCode> pts;
            for (std::size_t i = 0; i < n; ++i) pts.push_back(DiscretePoint{static_cast<std::int64_t>(i)});
            return {"two_valued", materialize(spec, pts)};
        }
        case 1: {
            LineSweep line;
            std::vector<PointCode> pts;
            for (std::size_t i = 0; i < n; ++i) {
                line.coords.push_back(0.5 * static_cast<double>(rng.uniform_index(13)));
                pts.push_back(EuclideanPoint{{line.coords.back()}});
            }
            return {"line", materialize(EuclideanSpace{1}, pts), line};
        }
        case 2: {
            std::vector<PointCode> pts;
            for (std::size_t i = 0; i < n; ++i)
                pts.push_back(EuclideanPoint{{static_cast<double>(rng.uniform_index(4)), static_cast<double>(rng.uniform_index(4))}});
            return {"plane", materialize(EuclideanSpace{2}, pts)};
        }
        case 3: return {"ultrametric", random_ultrametric(n, rng)};
        case 4: {
            HedgehogSweep hh{3, {}};
            std::vector<PointCode> pts;
            for (std::size_t i = 0; i < n; ++i) {
                hh.points.push_back(make_hedgehog_point(static_cast<std::int64_t>(rng.uniform_index(3)),
                                                        static_cast<double>(rng.uniform_index(5)) / 4.0));
                pts.push_back(hh.points.back());
            }
            return {"hedgehog", materialize(HedgehogSpace{3}, pts), hh};
        }
        default: return {"graph", random_graph_metric(n, rng)};
    }
}

BallFamily random_family(const FiniteMetricInstance& inst, std::size_t size, Rng& rng) {
    const double diameter = *std::max_element(inst.matrix().begin(), inst.matrix().end());
    BallFamily f;
    for (std::size_t b = 0; b < size; ++b) {
        const std::size_t c = rng.uniform_index(inst.size());
        const double r = rng.bernoulli(0.5) ? inst(c, rng.uniform_index(inst.size())) : rng.uniform(0.0, 0.6 * diameter);
        f.balls.push_back({c, r});
    }
    return f;
}

}  // namespace knnlab::fixture

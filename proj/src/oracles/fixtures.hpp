// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Random inputs shared by the acceptance suite and the unit tests. Every
// generator draws from small alphabets so that distance ties are common.

#include <string>

#include "knnlab/nagata.hpp"
#include "knnlab/rng.hpp"
#include "knnlab/space.hpp"

namespace knnlab::fixture {

SpaceSpec random_space(Rng& rng);
PointCode random_point(const SpaceSpec& spec, Rng& rng);

struct TestInstance {
    std::string kind;
    FiniteMetricInstance instance;
    Witness witness = FinitePoints{};
};

/// Three-level ultrametric: points carry codes (a, b); distance 3 when a
/// differs, 2 when only b differs, 1 otherwise.
FiniteMetricInstance random_ultrametric(std::size_t n, Rng& rng);

/// Shortest-path metric of a random connected graph with weights in {1,2,3}.
FiniteMetricInstance random_graph_metric(std::size_t n, Rng& rng);

/// Cycles through two-valued, line, plane, ultrametric, hedgehog and graph
/// instances by `which`; line and hedgehog instances carry sweep witnesses.
TestInstance random_instance(std::size_t which, std::size_t n, Rng& rng);

BallFamily random_family(const FiniteMetricInstance& instance, std::size_t size, Rng& rng);

}  // namespace knnlab::fixture

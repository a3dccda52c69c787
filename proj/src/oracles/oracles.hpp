// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reference computations used to check the library. Each one takes a
// different route from the code it checks: pairwise distance() calls and
// full sorts instead of packed kernels and selection, all-subsets
// enumeration instead of branch-and-bound, point evaluation instead of
// interval sweeps, numeric quadrature instead of closed forms.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "knnlab/knn.hpp"
#include "knnlab/nagata.hpp"
#include "knnlab/space.hpp"

namespace knnlab::oracle {

/// k-th smallest distance by a full sort of pairwise distance() values.
double sorted_kth_distance(const SpaceSpec& spec, const std::vector<PointCode>& points, const PointCode& x, std::size_t k);

/// Empty when `set` is a valid k-NN selection for x (k distinct indices,
/// all within the oracle radius, every strictly closer point included and
/// radius equal to the oracle radius); otherwise a description of the defect.
std::string knn_selection_defect(const SpaceSpec& spec, const std::vector<PointCode>& points, const PointCode& x,
                                 std::size_t k, const NeighborSet& set);

/// Multiplicity of family.balls[subset] evaluated pointwise on the witness.
int pointwise_multiplicity(const FiniteMetricInstance& instance, const BallFamily& family,
                           const std::vector<std::size_t>& subset, const Witness& witness);

/// Whether some covering subfamily of multiplicity <= delta + 1 exists,
/// by enumerating all 2^m - 1 nonempty subfamilies. m must be <= 20.
bool covering_subfamily_exists(const FiniteMetricInstance& instance, const BallFamily& family, int delta,
                               const Witness& witness);

/// Adaptive Simpson quadrature of f on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

}  // namespace knnlab::oracle

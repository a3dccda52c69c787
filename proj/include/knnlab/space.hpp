// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace knnlab {

// ---------------------------------------------------------------------------
// Spaces
// ---------------------------------------------------------------------------

/// R^d with the Euclidean norm.
struct EuclideanSpace {
    int dim = 1;
    bool operator==(const EuclideanSpace&) const = default;
};

/// [0,1] with the discrete metric d(x,x') = 1 if x x' = 0 (x != x'), 2 if
/// both are nonzero and distinct. Non-separable; every nonzero point is
/// isolated.
struct CGIntervalSpace {
    bool operator==(const CGIntervalSpace&) const = default;
};

/// N points with all nonzero distances equal to r.
struct TwoValuedSpace {
    std::int64_t size = 2;
    double r = 1.0;
    bool operator==(const TwoValuedSpace&) const = default;
};

/// tau unit intervals glued at t = 0 with the geodesic metric.
struct HedgehogSpace {
    std::int64_t spines = 1;
    bool operator==(const HedgehogSpace&) const = default;
};

/// Finitely supported sequences indexed by [0, index_bound) under the
/// supremum norm.
struct C00Space {
    std::int64_t index_bound = 1;
    bool operator==(const C00Space&) const = default;
};

using SpaceSpec = std::variant<EuclideanSpace, CGIntervalSpace, TwoValuedSpace, HedgehogSpace, C00Space>;

/// Throws UsageError if the space parameters are out of range.
void validate(const SpaceSpec& spec);

std::string describe(const SpaceSpec& spec);

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

struct EuclideanPoint {
    std::vector<double> coords;
    bool operator==(const EuclideanPoint&) const = default;
};

struct UnitIntervalPoint {
    double x = 0.0;
    bool operator==(const UnitIntervalPoint&) const = default;
};

struct DiscretePoint {
    std::int64_t index = 0;
    bool operator==(const DiscretePoint&) const = default;
};

/// Use make_hedgehog_point to build one; the glue point is stored as spine 0.
struct HedgehogPoint {
    std::int64_t spine = 0;
    double t = 0.0;
    bool operator==(const HedgehogPoint&) const = default;
};

/// Entries sorted by index with no zero values.
struct SparsePoint {
    std::vector<std::pair<std::int64_t, double>> entries;
    bool operator==(const SparsePoint&) const = default;
};

using PointCode = std::variant<EuclideanPoint, UnitIntervalPoint, DiscretePoint, HedgehogPoint, SparsePoint>;

HedgehogPoint make_hedgehog_point(std::int64_t spine, double t);

/// Sorts entries, drops zeros and rejects duplicate indices.
SparsePoint make_sparse_point(std::vector<std::pair<std::int64_t, double>> entries);

/// Throws UsageError unless p is a valid point of spec.
void validate_point(const SpaceSpec& spec, const PointCode& p);

bool is_valid_point(const SpaceSpec& spec, const PointCode& p);

std::string describe(const PointCode& p);

// ---------------------------------------------------------------------------
// Distances and finite instances
// ---------------------------------------------------------------------------

/// Metric value between two points of the same space. Throws UsageError if
/// either point does not belong to spec.
double distance(const SpaceSpec& spec, const PointCode& p, const PointCode& q);

/// Square distance matrix over a finite point set, row-major.
class FiniteMetricInstance {
public:
    FiniteMetricInstance() = default;
    FiniteMetricInstance(std::size_t n, std::vector<double> dist, std::vector<std::string> ids = {});

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    const std::vector<double>& matrix() const { return dist_; }
    const std::vector<std::string>& ids() const { return ids_; }

    /// Sub-instance on the given point indices, in the given order.
    FiniteMetricInstance restrict_to(const std::vector<std::size_t>& points) const;

    bool operator==(const FiniteMetricInstance&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> dist_;
    std::vector<std::string> ids_;
};

FiniteMetricInstance materialize(const SpaceSpec& spec, const std::vector<PointCode>& points);

enum class AxiomViolation { None, Negative, NonzeroDiagonal, Asymmetric, Triangle };

struct AxiomReport {
    bool ok = true;
    AxiomViolation kind = AxiomViolation::None;
    /// For Triangle: d(i,k) > d(i,j) + d(j,k). For pairwise defects k == j.
    std::optional<std::array<std::size_t, 3>> first_violation;
};

inline constexpr double kTriangleTolerance = 1e-12;

AxiomReport check_metric_axioms(const FiniteMetricInstance& instance);

/// True iff d(i,k) <= max(d(i,j), d(j,k)) for all triples.
bool is_strong_triangle(const FiniteMetricInstance& instance);

/// CSV distance matrix: a header row of point ids followed by n rows of n
/// numbers. Numbers are written in shortest round-trip form.
void write_csv(std::ostream& out, const FiniteMetricInstance& instance);
FiniteMetricInstance read_csv(std::istream& in);

// ---------------------------------------------------------------------------
// Config serialization
// ---------------------------------------------------------------------------

nlohmann::json to_json(const SpaceSpec& spec);
SpaceSpec space_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PointCode& p);
PointCode point_from_json(const nlohmann::json& j);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

}  // namespace knnlab

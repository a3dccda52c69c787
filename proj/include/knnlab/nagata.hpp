// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Nagata dimension at a scale, certified on finite instances.
//
// A center set X has dimension <= delta at scale s when every finite family
// of closed balls centred in X with radii < s admits a subfamily of
// multiplicity <= delta + 1 that still covers every centre of the family.
// Ball membership for covering is read from the instance distances; the
// multiplicity is measured over a witness set, which is either the instance
// points themselves or, for points on a line or a hedgehog, the whole
// continuum via an interval sweep.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "knnlab/space.hpp"

namespace knnlab {

struct Ball {
    std::size_t center = 0;
    double radius = 0.0;
    bool operator==(const Ball&) const = default;
};

struct BallFamily {
    std::vector<Ball> balls;
    double scale = std::numeric_limits<double>::infinity();
    /// The designated centre set X; empty means every instance point.
    std::vector<std::size_t> centers_subset;
};

struct Certificate {
    std::vector<std::size_t> chosen;  // indices into the family, ascending
    int multiplicity = 0;
};

/// Multiplicity over the instance points.
struct FinitePoints {};
/// Instance point i sits at coords[i] on the real line; balls are intervals.
struct LineSweep {
    std::vector<double> coords;
};
/// Instance point i is points[i] of a hedgehog with `spines` spines.
struct HedgehogSweep {
    std::int64_t spines = 1;
    std::vector<HedgehogPoint> points;
};

using Witness = std::variant<FinitePoints, LineSweep, HedgehogSweep>;

std::string witness_name(const Witness& w);

/// Throws UsageError if the witness geometry does not reproduce the
/// instance distances (to 1e-12) or has the wrong size.
void validate_witness(const FiniteMetricInstance& instance, const Witness& witness);

/// Throws UsageError unless every ball is centred in X with radius in [0, scale).
void validate_family(const FiniteMetricInstance& instance, const BallFamily& family);

/// Largest number of pairwise different balls sharing a witness point.
int multiplicity(const FiniteMetricInstance& instance, const BallFamily& family, const Witness& witness);

/// Multiplicity of the subfamily given by `chosen`.
int multiplicity_of(const FiniteMetricInstance& instance, const BallFamily& family, const std::vector<std::size_t>& chosen,
                    const Witness& witness);

/// Recomputes coverage and multiplicity from scratch.
bool validate_certificate(const FiniteMetricInstance& instance, const BallFamily& family, int delta,
                          const Witness& witness, const Certificate& cert);

inline constexpr std::size_t kExhaustiveFamilyLimit = 20;
inline constexpr std::size_t kExhaustiveCenterLimit = 8;

/// Exact branch-and-bound search for a covering subfamily of multiplicity
/// <= delta + 1. std::nullopt means none exists. Families above
/// kExhaustiveFamilyLimit throw CapacityError unless allow_heuristic is set,
/// in which case the greedy search runs and std::nullopt is inconclusive.
std::optional<Certificate> find_subfamily(const FiniteMetricInstance& instance, const BallFamily& family, int delta,
                                          const Witness& witness, bool allow_heuristic = false);

/// Sound but incomplete: any certificate returned is valid.
std::optional<Certificate> greedy_subfamily(const FiniteMetricInstance& instance, const BallFamily& family, int delta,
                                            const Witness& witness);

struct Exhaustive {};
struct Randomized {
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
};
using SearchMode = std::variant<Exhaustive, Randomized>;

struct DimensionVerdict {
    bool holds = true;
    /// Set when !holds: a family with no qualifying subfamily (proved exhaustively).
    std::optional<BallFamily> counterexample;
    std::size_t families_checked = 0;
    /// True in exhaustive mode, where a holds verdict is a proof over all
    /// candidate families; randomized holds verdicts are only evidence.
    bool exhaustive = false;
    std::string witness;
};

/// Enumerates (or samples) families with one ball per chosen centre and
/// radii drawn from the realized distances below `scale`; sweep witnesses
/// also get a radius just below the top of every radius class. Families with
/// several balls on one centre are never harder than their one-per-centre
/// subfamilies, so they need not be enumerated.
DimensionVerdict check_dim_at_scale(const FiniteMetricInstance& instance, const std::vector<std::size_t>& centers,
                                    int delta, double scale, const SearchMode& mode,
                                    const Witness& witness = FinitePoints{});

nlohmann::json to_json(const BallFamily& family);
/// Inverse of to_json(BallFamily); throws UsageError on malformed input.
BallFamily family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const DimensionVerdict& verdict);

}  // namespace knnlab

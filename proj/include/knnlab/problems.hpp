// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "knnlab/rng.hpp"
#include "knnlab/space.hpp"

namespace knnlab {

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

struct PointMass {
    PointCode point;
};

struct UniformFinite {
    std::vector<PointCode> points;
};

/// M equispaced atoms. On the unit interval the atoms are i/M for i = 1..M
/// (all of them nonzero); on indices they are offset, offset+1, ..., offset+M-1.
struct UniformGrid {
    enum class Target { UnitInterval, Indices };
    std::int64_t atoms = 1;
    Target target = Target::UnitInterval;
    std::int64_t offset = 0;
};

/// Continuous uniform law on [lo, hi] of the real line (one-dimensional
/// euclidean points).
struct UniformInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Spine chosen uniformly among tau, position uniform on [t_lo, t_hi].
struct UniformSpines {
    std::int64_t spines = 1;
    double t_lo = 0.0;
    double t_hi = 1.0;
};

using MeasureComponent = std::variant<PointMass, UniformFinite, UniformGrid, UniformInterval, UniformSpines>;

struct WeightedComponent {
    double weight = 1.0;
    MeasureComponent component;
};

/// Finite mixture; weights lie in (0,1] and sum to one.
struct Measure {
    std::vector<WeightedComponent> components;
};

// ---------------------------------------------------------------------------
// Regression functions
// ---------------------------------------------------------------------------

struct IndicatorOfPoint {
    PointCode point;
};
struct IndicatorOfComplementOfPoint {
    PointCode point;
};
/// eta(x) = x on [0,1]; defined for unit-interval and 1-d euclidean points.
struct LinearOnInterval {};
struct Constant {
    double value = 0.5;
};
/// eta = 1 on odd-numbered hedgehog spines, 0 elsewhere (glue included).
struct SpineParity {};
/// eta = 1 beyond `threshold` along every hedgehog spine, 0 before it.
struct SpineTip {
    double threshold = 0.5;
};

using RegressionFn =
    std::variant<IndicatorOfPoint, IndicatorOfComplementOfPoint, LinearOnInterval, Constant, SpineParity, SpineTip>;

// ---------------------------------------------------------------------------
// Problems and samples
// ---------------------------------------------------------------------------

struct LearningProblem {
    std::string name;
    SpaceSpec spec;
    Measure mu;
    RegressionFn eta;
};

/// Throws UsageError if weights do not sum to one, a component is empty or
/// produces points outside the space, or eta is not defined on the support.
void validate(const LearningProblem& problem);

struct LabeledPoint {
    PointCode point;
    int label = 0;
};

struct LabeledSample {
    std::vector<LabeledPoint> pairs;
    std::size_t size() const { return pairs.size(); }
};

inline constexpr double kWeightTolerance = 1e-12;

double eval_eta(const LearningProblem& problem, const PointCode& x);

/// 1 if eta(x) >= 1/2, else 0.
int bayes_label(const LearningProblem& problem, const PointCode& x);

/// One draw X ~ mu.
PointCode draw_point(const LearningProblem& problem, Rng& rng);

/// Index of the mixture component a draw came from is reported through
/// component_out when non-null; used by frequency tests.
PointCode draw_point(const LearningProblem& problem, Rng& rng, std::size_t* component_out);

/// One labelled pair: X ~ mu, then Y = [U < eta(X)] for a fresh uniform U.
LabeledPoint draw_labeled(const LearningProblem& problem, Rng& rng);

LabeledSample draw_sample(const LearningProblem& problem, Rng& rng, std::size_t n);

/// Exact integral of min(eta, 1 - eta) against mu.
double bayes_error(const LearningProblem& problem);

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// mu = 1/2 delta_0 + 1/2 uniform on M grid atoms in (0,1]; eta = 1 off the origin.
LearningProblem problem_cerou_guyader(std::int64_t atoms);

/// Point y = #0; mu = 1/3 uniform on the other N-1 points + 2/3 delta_y; eta = 1 at y only.
LearningProblem problem_two_valued(std::int64_t points, double r);

/// Uniform over the tip halves t in [1/2, 1] of tau spines; labels by spine parity.
LearningProblem problem_hedgehog(std::int64_t spines);

/// Uniform over whole spines t in [0, 1]; label 1 iff t > 1/2.
LearningProblem problem_hedgehog_full_spines(std::int64_t spines);

/// Uniform on [0,1] of the real line with eta(x) = x.
LearningProblem problem_euclidean_linear();

/// Uniform on [0,1] of the real line with constant eta.
LearningProblem problem_constant(double value);

/// Builds a problem by registry name; parameter keys depend on the builder:
/// cerou_guyader{atoms}, two_valued{points, r}, hedgehog{spines},
/// hedgehog_full_spines{spines}, euclidean_linear{}, constant{value}.
/// Unknown names or keys throw UsageError.
LearningProblem build_problem(const std::string& name, const std::map<std::string, double>& params);

std::vector<std::string> problem_names();

}  // namespace knnlab

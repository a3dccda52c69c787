// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include "knnlab/problems.hpp"

#include <algorithm>
#include <cmath>

#include "knnlab/error.hpp"

namespace knnlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool same_point(const SpaceSpec& spec, const PointCode& a, const PointCode& b) { return distance(spec, a, b) == 0.0; }

// Value of x on the real line for eta = x; throws for other point kinds.
double linear_coordinate(const PointCode& x) {
    if (const auto* u = std::get_if<UnitIntervalPoint>(&x)) return u->x;
    if (const auto* e = std::get_if<EuclideanPoint>(&x); e && e->coords.size() == 1) return e->coords[0];
    throw UsageError("eta(x) = x needs a unit-interval or one-dimensional point");
}

// Antiderivative of min(x, 1 - x) on [0,1], zero at the origin.
double min_linear_antiderivative(double x) {
    if (x <= 0.5) return 0.5 * x * x;
    return 0.125 + (x - 0.5) - 0.5 * (x * x - 0.25);
}

bool eta_is_indicator(const RegressionFn& eta) {
    return std::holds_alternative<IndicatorOfPoint>(eta) || std::holds_alternative<IndicatorOfComplementOfPoint>(eta) ||
           std::holds_alternative<SpineParity>(eta) || std::holds_alternative<SpineTip>(eta);
}

void validate_component(const SpaceSpec& spec, const MeasureComponent& c) {
    std::visit(overloaded{
                   [&](const PointMass& m) { validate_point(spec, m.point); },
                   [&](const UniformFinite& f) {
                       if (f.points.empty()) throw UsageError("uniform-finite component has no points");
                       for (const auto& p : f.points) validate_point(spec, p);
                   },
                   [&](const UniformGrid& g) {
                       if (g.atoms < 1) throw UsageError("grid needs at least one atom");
                       if (g.target == UniformGrid::Target::UnitInterval) {
                           if (!std::holds_alternative<CGIntervalSpace>(spec))
                               throw UsageError("unit-interval grid needs the cg_interval space");
                       } else {
                           const auto* tv = std::get_if<TwoValuedSpace>(&spec);
                           if (!tv) throw UsageError("index grid needs the two_valued space");
                           if (g.offset < 0 || g.offset + g.atoms > tv->size)
                               throw UsageError("index grid exceeds the two-valued space");
                       }
                   },
                   [&](const UniformInterval& u) {
                       const auto* e = std::get_if<EuclideanSpace>(&spec);
                       if (!e || e->dim != 1) throw UsageError("uniform interval needs one-dimensional euclidean space");
                       if (!(u.lo < u.hi) || !std::isfinite(u.lo) || !std::isfinite(u.hi))
                           throw UsageError("uniform interval needs finite lo < hi");
                   },
                   [&](const UniformSpines& s) {
                       const auto* h = std::get_if<HedgehogSpace>(&spec);
                       if (!h) throw UsageError("uniform spines need the hedgehog space");
                       if (s.spines < 1 || s.spines > h->spines) throw UsageError("spine count outside the hedgehog");
                       if (!(0.0 <= s.t_lo && s.t_lo <= s.t_hi && s.t_hi <= 1.0))
                           throw UsageError("spine positions must satisfy 0 <= t_lo <= t_hi <= 1");
                   },
               },
               c);
}

void validate_eta_on(const LearningProblem& p, const MeasureComponent& c) {
    std::visit(overloaded{
                   [&](const IndicatorOfPoint& e) { validate_point(p.spec, e.point); },
                   [&](const IndicatorOfComplementOfPoint& e) { validate_point(p.spec, e.point); },
                   [&](const Constant& e) {
                       if (!(e.value >= 0.0 && e.value <= 1.0)) throw UsageError("constant eta outside [0,1]");
                   },
                   [&](const SpineParity&) {
                       if (!std::holds_alternative<HedgehogSpace>(p.spec))
                           throw UsageError("spine-parity eta needs the hedgehog space");
                   },
                   [&](const SpineTip& e) {
                       if (!std::holds_alternative<HedgehogSpace>(p.spec))
                           throw UsageError("spine-tip eta needs the hedgehog space");
                       if (!(e.threshold >= 0.0 && e.threshold <= 1.0)) throw UsageError("spine-tip threshold outside [0,1]");
                   },
                   [&](const LinearOnInterval&) {
                       const bool ok = std::visit(overloaded{
                                                      [](const UniformGrid& g) { return g.target == UniformGrid::Target::UnitInterval; },
                                                      [](const UniformInterval& u) { return u.lo >= 0.0 && u.hi <= 1.0; },
                                                      [](const PointMass& m) {
                                                          try {
                                                              const double x = linear_coordinate(m.point);
                                                              return x >= 0.0 && x <= 1.0;
                                                          } catch (const UsageError&) {
                                                              return false;
                                                          }
                                                      },
                                                      [](const UniformFinite& f) {
                                                          return std::all_of(f.points.begin(), f.points.end(), [](const PointCode& q) {
                                                              try {
                                                                  const double x = linear_coordinate(q);
                                                                  return x >= 0.0 && x <= 1.0;
                                                              } catch (const UsageError&) {
                                                                  return false;
                                                              }
                                                          });
                                                      },
                                                      [](const UniformSpines&) { return false; },
                                                  },
                                                  c);
                       if (!ok) throw UsageError("eta(x) = x is not defined on the support of the measure");
                   },
               },
               p.eta);
}

double min_eta(const LearningProblem& p, const PointCode& x) {
    const double e = eval_eta(p, x);
    return std::min(e, 1.0 - e);
}

double component_bayes(const LearningProblem& p, const MeasureComponent& c) {
    if (eta_is_indicator(p.eta) && !std::holds_alternative<PointMass>(c) && !std::holds_alternative<UniformFinite>(c))
        return 0.0;
    if (const auto* k = std::get_if<Constant>(&p.eta)) return std::min(k->value, 1.0 - k->value);
    return std::visit(overloaded{
                          [&](const PointMass& m) { return min_eta(p, m.point); },
                          [&](const UniformFinite& f) {
                              double acc = 0.0;
                              for (const auto& q : f.points) acc += min_eta(p, q);
                              return acc / static_cast<double>(f.points.size());
                          },
                          [&](const UniformGrid& g) {
                              // Linear eta on atoms i/M: sum of min(i, M - i) is M^2/4 (M even)
                              // or (M^2 - 1)/4 (M odd).
                              const double m = static_cast<double>(g.atoms);
                              return g.atoms % 2 == 0 ? 0.25 : (m * m - 1.0) / (4.0 * m * m);
                          },
                          [&](const UniformInterval& u) {
                              return (min_linear_antiderivative(u.hi) - min_linear_antiderivative(u.lo)) / (u.hi - u.lo);
                          },
                          [&](const UniformSpines&) -> double {
                              throw UsageError("no closed-form Bayes error for this eta on spines");
                          },
                      },
                      c);
}

PointCode draw_from(const MeasureComponent& c, Rng& rng) {
    return std::visit(overloaded{
                          [](const PointMass& m) -> PointCode { return m.point; },
                          [&](const UniformFinite& f) -> PointCode { return f.points[rng.uniform_index(f.points.size())]; },
                          [&](const UniformGrid& g) -> PointCode {
                              const auto i = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(g.atoms)));
                              if (g.target == UniformGrid::Target::UnitInterval)
                                  return UnitIntervalPoint{static_cast<double>(i + 1) / static_cast<double>(g.atoms)};
                              return DiscretePoint{g.offset + i};
                          },
                          [&](const UniformInterval& u) -> PointCode { return EuclideanPoint{{rng.uniform(u.lo, u.hi)}}; },
                          [&](const UniformSpines& s) -> PointCode {
                              const auto spine = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(s.spines)));
                              return make_hedgehog_point(spine, rng.uniform(s.t_lo, s.t_hi));
                          },
                      },
                      c);
}

}  // namespace

void validate(const LearningProblem& p) {
    validate(p.spec);
    if (p.mu.components.empty()) throw UsageError("measure has no components");
    double total = 0.0;
    for (const auto& wc : p.mu.components) {
        if (!(wc.weight > 0.0 && wc.weight <= 1.0)) throw UsageError("mixture weight outside (0,1]");
        total += wc.weight;
        validate_component(p.spec, wc.component);
        validate_eta_on(p, wc.component);
    }
    if (std::fabs(total - 1.0) > kWeightTolerance) throw UsageError("mixture weights do not sum to 1");
}

double eval_eta(const LearningProblem& p, const PointCode& x) {
    validate_point(p.spec, x);
    return std::visit(overloaded{
                          [&](const IndicatorOfPoint& e) { return same_point(p.spec, x, e.point) ? 1.0 : 0.0; },
                          [&](const IndicatorOfComplementOfPoint& e) { return same_point(p.spec, x, e.point) ? 0.0 : 1.0; },
                          [&](const LinearOnInterval&) {
                              const double v = linear_coordinate(x);
                              if (!(v >= 0.0 && v <= 1.0)) throw UsageError("eta(x) = x evaluated outside [0,1]");
                              return v;
                          },
                          [&](const Constant& e) { return e.value; },
                          [&](const SpineParity&) {
                              const auto& h = std::get<HedgehogPoint>(x);
                              return (h.t > 0.0 && h.spine % 2 == 1) ? 1.0 : 0.0;
                          },
                          [&](const SpineTip& e) { return std::get<HedgehogPoint>(x).t > e.threshold ? 1.0 : 0.0; },
                      },
                      p.eta);
}

int bayes_label(const LearningProblem& p, const PointCode& x) { return eval_eta(p, x) >= 0.5 ? 1 : 0; }

PointCode draw_point(const LearningProblem& p, Rng& rng, std::size_t* component_out) {
    const auto& comps = p.mu.components;
    const double u = rng.uniform01();
    double cumulative = 0.0;
    std::size_t chosen = comps.size() - 1;
    for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
        cumulative += comps[i].weight;
        if (u < cumulative) {
            chosen = i;
            break;
        }
    }
    if (component_out) *component_out = chosen;
    return draw_from(comps[chosen].component, rng);
}

PointCode draw_point(const LearningProblem& p, Rng& rng) { return draw_point(p, rng, nullptr); }

LabeledPoint draw_labeled(const LearningProblem& p, Rng& rng) {
    PointCode x = draw_point(p, rng);
    const double e = eval_eta(p, x);
    const int y = rng.uniform01() < e ? 1 : 0;
    return {std::move(x), y};
}

LabeledSample draw_sample(const LearningProblem& p, Rng& rng, std::size_t n) {
    if (n == 0) throw UsageError("sample size must be >= 1");
    LabeledSample s;
    s.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.pairs.push_back(draw_labeled(p, rng));
    return s;
}

double bayes_error(const LearningProblem& p) {
    double total = 0.0;
    for (const auto& wc : p.mu.components) total += wc.weight * component_bayes(p, wc.component);
    return total;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

LearningProblem problem_cerou_guyader(std::int64_t atoms) {
    if (atoms < 2) throw UsageError("cerou_guyader needs at least 2 grid atoms");
    LearningProblem p{"cerou_guyader",
                      CGIntervalSpace{},
                      Measure{{{0.5, PointMass{UnitIntervalPoint{0.0}}},
                               {0.5, UniformGrid{atoms, UniformGrid::Target::UnitInterval, 0}}}},
                      IndicatorOfComplementOfPoint{UnitIntervalPoint{0.0}}};
    validate(p);
    return p;
}

LearningProblem problem_two_valued(std::int64_t points, double r) {
    if (points < 2) throw UsageError("two_valued needs at least 2 points");
    LearningProblem p{"two_valued",
                      TwoValuedSpace{points, r},
                      Measure{{{1.0 / 3.0, UniformGrid{points - 1, UniformGrid::Target::Indices, 1}},
                               {2.0 / 3.0, PointMass{DiscretePoint{0}}}}},
                      IndicatorOfPoint{DiscretePoint{0}}};
    validate(p);
    return p;
}

LearningProblem problem_hedgehog(std::int64_t spines) {
    if (spines < 2) throw UsageError("hedgehog problem needs at least 2 spines");
    LearningProblem p{"hedgehog", HedgehogSpace{spines}, Measure{{{1.0, UniformSpines{spines, 0.5, 1.0}}}}, SpineParity{}};
    validate(p);
    return p;
}

LearningProblem problem_hedgehog_full_spines(std::int64_t spines) {
    if (spines < 2) throw UsageError("hedgehog problem needs at least 2 spines");
    LearningProblem p{"hedgehog_full_spines", HedgehogSpace{spines}, Measure{{{1.0, UniformSpines{spines, 0.0, 1.0}}}},
                      SpineTip{0.5}};
    validate(p);
    return p;
}

LearningProblem problem_euclidean_linear() {
    LearningProblem p{"euclidean_linear", EuclideanSpace{1}, Measure{{{1.0, UniformInterval{0.0, 1.0}}}}, LinearOnInterval{}};
    validate(p);
    return p;
}

LearningProblem problem_constant(double value) {
    LearningProblem p{"constant", EuclideanSpace{1}, Measure{{{1.0, UniformInterval{0.0, 1.0}}}}, Constant{value}};
    validate(p);
    return p;
}

namespace {

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    params.erase(it);
    return v;
}

std::int64_t take_count(std::map<std::string, double>& params, const std::string& key, std::int64_t fallback) {
    const double v = take(params, key, static_cast<double>(fallback));
    if (v != std::floor(v) || v < 0 || v > 9.0e15) throw UsageError("parameter '" + key + "' must be a non-negative integer");
    return static_cast<std::int64_t>(v);
}

}  // namespace

LearningProblem build_problem(const std::string& name, const std::map<std::string, double>& given) {
    auto params = given;
    LearningProblem p;
    if (name == "cerou_guyader") {
        p = problem_cerou_guyader(take_count(params, "atoms", 100000));
    } else if (name == "two_valued") {
        const auto points = take_count(params, "points", 100000);
        p = problem_two_valued(points, take(params, "r", 1.0));
    } else if (name == "hedgehog") {
        p = problem_hedgehog(take_count(params, "spines", 512));
    } else if (name == "hedgehog_full_spines") {
        p = problem_hedgehog_full_spines(take_count(params, "spines", 512));
    } else if (name == "euclidean_linear") {
        p = problem_euclidean_linear();
    } else if (name == "constant") {
        p = problem_constant(take(params, "value", 1.0));
    } else {
        throw UsageError("unknown problem '" + name + "'");
    }
    if (!params.empty()) throw UsageError("unknown parameter '" + params.begin()->first + "' for problem '" + name + "'");
    return p;
}

std::vector<std::string> problem_names() {
    return {"cerou_guyader", "two_valued", "hedgehog", "hedgehog_full_spines", "euclidean_linear", "constant"};
}

}  // namespace knnlab

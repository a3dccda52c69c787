// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include "knnlab/space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "knnlab/error.hpp"

namespace knnlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

std::string kind_name(const PointCode& p) {
    static constexpr const char* names[] = {"euclidean", "unit_interval", "discrete", "hedgehog", "sparse"};
    return names[p.index()];
}

// Returns an empty string when the point is valid, a reason otherwise.
std::string point_problem(const SpaceSpec& spec, const PointCode& p) {
    return std::visit(
        overloaded{
            [&](const EuclideanSpace& s) -> std::string {
                const auto* e = std::get_if<EuclideanPoint>(&p);
                if (!e) return "expected a euclidean point, got " + kind_name(p);
                if (e->coords.size() != static_cast<std::size_t>(s.dim)) return "coordinate count does not match dimension";
                for (double c : e->coords)
                    if (!std::isfinite(c)) return "non-finite coordinate";
                return {};
            },
            [&](const CGIntervalSpace&) -> std::string {
                const auto* u = std::get_if<UnitIntervalPoint>(&p);
                if (!u) return "expected a unit-interval point, got " + kind_name(p);
                if (!in_unit_interval(u->x)) return "point outside [0,1]";
                return {};
            },
            [&](const TwoValuedSpace& s) -> std::string {
                const auto* d = std::get_if<DiscretePoint>(&p);
                if (!d) return "expected a discrete point, got " + kind_name(p);
                if (d->index < 0 || d->index >= s.size) return "index outside [0,N)";
                return {};
            },
            [&](const HedgehogSpace& s) -> std::string {
                const auto* h = std::get_if<HedgehogPoint>(&p);
                if (!h) return "expected a hedgehog point, got " + kind_name(p);
                if (h->spine < 0 || h->spine >= s.spines) return "spine outside [0,tau)";
                if (!in_unit_interval(h->t)) return "spine position outside [0,1]";
                if (h->t == 0.0 && h->spine != 0) return "glue point must be stored on spine 0";
                return {};
            },
            [&](const C00Space& s) -> std::string {
                const auto* sp = std::get_if<SparsePoint>(&p);
                if (!sp) return "expected a sparse point, got " + kind_name(p);
                std::int64_t prev = -1;
                for (const auto& [idx, v] : sp->entries) {
                    if (idx < 0 || idx >= s.index_bound) return "sparse index outside bound";
                    if (idx <= prev) return "sparse entries not strictly increasing";
                    if (v == 0.0 || !std::isfinite(v)) return "sparse entry zero or non-finite";
                    prev = idx;
                }
                return {};
            },
        },
        spec);
}

double sup_norm_difference(const SparsePoint& a, const SparsePoint& b) {
    double best = 0.0;
    auto i = a.entries.begin();
    auto j = b.entries.begin();
    while (i != a.entries.end() || j != b.entries.end()) {
        double diff;
        if (j == b.entries.end() || (i != a.entries.end() && i->first < j->first)) {
            diff = i->second;
            ++i;
        } else if (i == a.entries.end() || j->first < i->first) {
            diff = j->second;
            ++j;
        } else {
            diff = i->second - j->second;
            ++i;
            ++j;
        }
        best = std::max(best, std::fabs(diff));
    }
    return best;
}

}  // namespace

void validate(const SpaceSpec& spec) {
    std::visit(overloaded{
                   [](const EuclideanSpace& s) {
                       if (s.dim < 1) throw UsageError("euclidean dimension must be >= 1");
                   },
                   [](const CGIntervalSpace&) {},
                   [](const TwoValuedSpace& s) {
                       if (s.size < 2) throw UsageError("two-valued space needs N >= 2");
                       if (!(s.r > 0.0) || !std::isfinite(s.r)) throw UsageError("two-valued distance r must be positive");
                   },
                   [](const HedgehogSpace& s) {
                       if (s.spines < 1) throw UsageError("hedgehog needs at least one spine");
                   },
                   [](const C00Space& s) {
                       if (s.index_bound < 1) throw UsageError("c00 index bound must be >= 1");
                   },
               },
               spec);
}

std::string describe(const SpaceSpec& spec) {
    return std::visit(overloaded{
                          [](const EuclideanSpace& s) { return "euclidean(d=" + std::to_string(s.dim) + ")"; },
                          [](const CGIntervalSpace&) { return std::string("cg_interval"); },
                          [](const TwoValuedSpace& s) {
                              return "two_valued(N=" + std::to_string(s.size) + ", r=" + format_double(s.r) + ")";
                          },
                          [](const HedgehogSpace& s) { return "hedgehog(tau=" + std::to_string(s.spines) + ")"; },
                          [](const C00Space& s) { return "c00(index_bound=" + std::to_string(s.index_bound) + ")"; },
                      },
                      spec);
}

HedgehogPoint make_hedgehog_point(std::int64_t spine, double t) {
    if (t == 0.0) return HedgehogPoint{0, 0.0};
    return HedgehogPoint{spine, t};
}

SparsePoint make_sparse_point(std::vector<std::pair<std::int64_t, double>> entries) {
    std::erase_if(entries, [](const auto& e) { return e.second == 0.0; });
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].first == entries[i - 1].first) throw UsageError("duplicate sparse index");
    return SparsePoint{std::move(entries)};
}

void validate_point(const SpaceSpec& spec, const PointCode& p) {
    if (auto why = point_problem(spec, p); !why.empty()) throw UsageError(describe(spec) + ": " + why);
}

bool is_valid_point(const SpaceSpec& spec, const PointCode& p) { return point_problem(spec, p).empty(); }

std::string describe(const PointCode& p) {
    return std::visit(overloaded{
                          [](const EuclideanPoint& e) {
                              std::string s = "(";
                              for (std::size_t i = 0; i < e.coords.size(); ++i) {
                                  if (i) s += ", ";
                                  s += format_double(e.coords[i]);
                              }
                              return s + ")";
                          },
                          [](const UnitIntervalPoint& u) { return format_double(u.x); },
                          [](const DiscretePoint& d) { return "#" + std::to_string(d.index); },
                          [](const HedgehogPoint& h) {
                              return "spine " + std::to_string(h.spine) + " @ " + format_double(h.t);
                          },
                          [](const SparsePoint& sp) {
                              std::string s = "{";
                              for (std::size_t i = 0; i < sp.entries.size(); ++i) {
                                  if (i) s += ", ";
                                  s += std::to_string(sp.entries[i].first) + ": " + format_double(sp.entries[i].second);
                              }
                              return s + "}";
                          },
                      },
                      p);
}

double distance(const SpaceSpec& spec, const PointCode& p, const PointCode& q) {
    validate_point(spec, p);
    validate_point(spec, q);
    return std::visit(
        overloaded{
            [&](const EuclideanSpace& s) {
                const auto& a = std::get<EuclideanPoint>(p).coords;
                const auto& b = std::get<EuclideanPoint>(q).coords;
                if (s.dim == 1) return std::fabs(a[0] - b[0]);
                double acc = 0.0;
                for (int k = 0; k < s.dim; ++k) {
                    const double diff = a[k] - b[k];
                    acc = acc + diff * diff;
                }
                return std::sqrt(acc);
            },
            [&](const CGIntervalSpace&) {
                const double x = std::get<UnitIntervalPoint>(p).x;
                const double y = std::get<UnitIntervalPoint>(q).x;
                if (x == y) return 0.0;
                return (x == 0.0 || y == 0.0) ? 1.0 : 2.0;
            },
            [&](const TwoValuedSpace& s) {
                return std::get<DiscretePoint>(p).index == std::get<DiscretePoint>(q).index ? 0.0 : s.r;
            },
            [&](const HedgehogSpace&) {
                const auto& a = std::get<HedgehogPoint>(p);
                const auto& b = std::get<HedgehogPoint>(q);
                // Cross-spine paths pass through the glue point.
                return a.spine == b.spine ? std::fabs(a.t - b.t) : a.t + b.t;
            },
            [&](const C00Space&) { return sup_norm_difference(std::get<SparsePoint>(p), std::get<SparsePoint>(q)); },
        },
        spec);
}

FiniteMetricInstance::FiniteMetricInstance(std::size_t n, std::vector<double> dist, std::vector<std::string> ids)
    : n_(n), dist_(std::move(dist)), ids_(std::move(ids)) {
    if (n_ == 0) throw UsageError("finite metric instance needs at least one point");
    if (dist_.size() != n_ * n_) throw UsageError("distance matrix is not n x n");
    if (ids_.empty()) {
        ids_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) ids_.push_back("p" + std::to_string(i));
    } else if (ids_.size() != n_) {
        throw UsageError("point id count does not match matrix size");
    }
}

FiniteMetricInstance FiniteMetricInstance::restrict_to(const std::vector<std::size_t>& points) const {
    std::vector<double> sub(points.size() * points.size());
    std::vector<std::string> ids;
    for (std::size_t a = 0; a < points.size(); ++a) {
        if (points[a] >= n_) throw UsageError("restriction index out of range");
        ids.push_back(ids_[points[a]]);
        for (std::size_t b = 0; b < points.size(); ++b) sub[a * points.size() + b] = (*this)(points[a], points[b]);
    }
    return FiniteMetricInstance(points.size(), std::move(sub), std::move(ids));
}

FiniteMetricInstance materialize(const SpaceSpec& spec, const std::vector<PointCode>& points) {
    validate(spec);
    const std::size_t n = points.size();
    if (n == 0) throw UsageError("cannot materialize an empty point list");
    for (const auto& p : points) validate_point(spec, p);
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = distance(spec, points[i], points[j]);
    return FiniteMetricInstance(n, std::move(dist));
}

AxiomReport check_metric_axioms(const FiniteMetricInstance& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (m(i, i) != 0.0) return {false, AxiomViolation::NonzeroDiagonal, std::array{i, i, i}};
        for (std::size_t j = 0; j < n; ++j) {
            if (!(m(i, j) >= 0.0)) return {false, AxiomViolation::Negative, std::array{i, j, j}};
            if (m(i, j) != m(j, i)) return {false, AxiomViolation::Asymmetric, std::array{i, j, j}};
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (m(i, k) > m(i, j) + m(j, k) + kTriangleTolerance)
                    return {false, AxiomViolation::Triangle, std::array{i, j, k}};
    return {};
}

bool is_strong_triangle(const FiniteMetricInstance& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (m(i, k) > std::max(m(i, j), m(j, k)) + kTriangleTolerance) return false;
    return true;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError("not a number: '" + std::string(text) + "'");
    return v;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

void write_csv(std::ostream& out, const FiniteMetricInstance& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << m.ids()[i];
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out << (j ? "," : "") << format_double(m(i, j));
        out << '\n';
    }
}

FiniteMetricInstance read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw UsageError("empty distance matrix CSV");
    auto ids = split_csv_line(line);
    const std::size_t n = ids.size();
    if (n == 0) throw UsageError("distance matrix CSV has no header ids");
    std::vector<double> dist;
    dist.reserve(n * n);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (cells.size() != n)
            throw UsageError("row " + std::to_string(rows + 1) + " has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(n));
        for (const auto& c : cells) dist.push_back(parse_double(c));
        ++rows;
    }
    if (rows != n) throw UsageError("distance matrix CSV has " + std::to_string(rows) + " rows for " + std::to_string(n) + " ids");
    return FiniteMetricInstance(n, std::move(dist), std::move(ids));
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

nlohmann::json to_json(const SpaceSpec& spec) {
    using nlohmann::json;
    return std::visit(overloaded{
                          [](const EuclideanSpace& s) { return json{{"kind", "euclidean"}, {"dim", s.dim}}; },
                          [](const CGIntervalSpace&) { return json{{"kind", "cg_interval"}}; },
                          [](const TwoValuedSpace& s) { return json{{"kind", "two_valued"}, {"N", s.size}, {"r", s.r}}; },
                          [](const HedgehogSpace& s) { return json{{"kind", "hedgehog"}, {"tau", s.spines}}; },
                          [](const C00Space& s) { return json{{"kind", "c00"}, {"index_bound", s.index_bound}}; },
                      },
                      spec);
}

SpaceSpec space_from_json(const nlohmann::json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        SpaceSpec spec;
        if (kind == "euclidean")
            spec = EuclideanSpace{j.at("dim").get<int>()};
        else if (kind == "cg_interval")
            spec = CGIntervalSpace{};
        else if (kind == "two_valued")
            spec = TwoValuedSpace{j.at("N").get<std::int64_t>(), j.at("r").get<double>()};
        else if (kind == "hedgehog")
            spec = HedgehogSpace{j.at("tau").get<std::int64_t>()};
        else if (kind == "c00")
            spec = C00Space{j.at("index_bound").get<std::int64_t>()};
        else
            throw UsageError("unknown space kind '" + kind + "'");
        validate(spec);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed space description: ") + e.what());
    }
}

nlohmann::json to_json(const PointCode& p) {
    using nlohmann::json;
    return std::visit(overloaded{
                          [](const EuclideanPoint& e) { return json{{"kind", "euclidean"}, {"coords", e.coords}}; },
                          [](const UnitIntervalPoint& u) { return json{{"kind", "unit_interval"}, {"x", u.x}}; },
                          [](const DiscretePoint& d) { return json{{"kind", "discrete"}, {"index", d.index}}; },
                          [](const HedgehogPoint& h) { return json{{"kind", "hedgehog"}, {"spine", h.spine}, {"t", h.t}}; },
                          [](const SparsePoint& s) {
                              json entries = json::array();
                              for (const auto& [i, v] : s.entries) entries.push_back(json::array({i, v}));
                              return json{{"kind", "sparse"}, {"entries", entries}};
                          },
                      },
                      p);
}

PointCode point_from_json(const nlohmann::json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "euclidean") return EuclideanPoint{j.at("coords").get<std::vector<double>>()};
        if (kind == "unit_interval") return UnitIntervalPoint{j.at("x").get<double>()};
        if (kind == "discrete") return DiscretePoint{j.at("index").get<std::int64_t>()};
        if (kind == "hedgehog") return make_hedgehog_point(j.at("spine").get<std::int64_t>(), j.at("t").get<double>());
        if (kind == "sparse") {
            std::vector<std::pair<std::int64_t, double>> entries;
            for (const auto& e : j.at("entries")) entries.emplace_back(e.at(0).get<std::int64_t>(), e.at(1).get<double>());
            return make_sparse_point(std::move(entries));
        }
        throw UsageError("unknown point kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed point description: ") + e.what());
    }
}

}  // namespace knnlab

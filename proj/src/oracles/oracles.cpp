// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "knnlab/error.hpp"

namespace knnlab::oracle {

double sorted_kth_distance(const SpaceSpec& spec, const std::vector<PointCode>& points, const PointCode& x, std::size_t k) {
    std::vector<double> d;
    for (const auto& p : points) d.push_back(distance(spec, p, x));
    std::sort(d.begin(), d.end());
    return d.at(k - 1);
}

std::string knn_selection_defect(const SpaceSpec& spec, const std::vector<PointCode>& points, const PointCode& x,
                                 std::size_t k, const NeighborSet& set) {
    const double r = sorted_kth_distance(spec, points, x, k);
    if (set.radius != r) return "radius " + format_double(set.radius) + " differs from order statistic " + format_double(r);
    if (set.indices.size() != k) return "selected " + std::to_string(set.indices.size()) + " points, expected " + std::to_string(k);
    std::set<std::size_t> chosen(set.indices.begin(), set.indices.end());
    if (chosen.size() != k) return "selection repeats an index";
    for (auto i : chosen) {
        if (i >= points.size()) return "index out of range";
        if (distance(spec, points[i], x) > r) return "selected point " + std::to_string(i) + " lies outside the k-NN ball";
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        if (distance(spec, points[i], x) < r && !chosen.count(i))
            return "point " + std::to_string(i) + " is strictly inside the k-NN ball but not selected";
    return {};
}

namespace {

// Candidate evaluation points of a hedgehog witness: per scanned spine, every
// interval endpoint a ball can produce, plus midpoints between them.
std::vector<HedgehogPoint> hedgehog_probe_points(const HedgehogSweep& hh, const BallFamily& family,
                                                 const std::vector<std::size_t>& subset) {
    std::set<std::int64_t> spines;
    for (auto i : subset) spines.insert(hh.points[family.balls[i].center].spine);
    for (std::int64_t s = 0; s < hh.spines && static_cast<std::int64_t>(spines.size()) < hh.spines; ++s)
        if (!spines.count(s)) {
            spines.insert(s);
            break;
        }
    std::set<double> ts{0.0, 1.0};
    for (auto i : subset) {
        const auto& c = hh.points[family.balls[i].center];
        const double r = family.balls[i].radius;
        for (double t : {c.t - r, c.t + r, r - c.t})
            if (t >= 0.0 && t <= 1.0) ts.insert(t);
    }
    std::vector<double> sorted(ts.begin(), ts.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) ts.insert(0.5 * (sorted[i - 1] + sorted[i]));
    std::vector<HedgehogPoint> out;
    for (auto s : spines)
        for (double t : ts) out.push_back(make_hedgehog_point(s, t));
    return out;
}

std::vector<double> line_probe_points(const LineSweep& line, const BallFamily& family, const std::vector<std::size_t>& subset) {
    std::set<double> xs;
    for (auto i : subset) {
        const double c = line.coords[family.balls[i].center];
        xs.insert(c - family.balls[i].radius);
        xs.insert(c + family.balls[i].radius);
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) xs.insert(0.5 * (sorted[i - 1] + sorted[i]));
    return {xs.begin(), xs.end()};
}

// Membership matrix: rows are balls of the subset, columns probe points.
std::vector<std::vector<bool>> membership(const FiniteMetricInstance& inst, const BallFamily& family,
                                          const std::vector<std::size_t>& subset, const Witness& witness) {
    std::vector<std::vector<bool>> rows;
    if (std::holds_alternative<FinitePoints>(witness)) {
        for (auto i : subset) {
            std::vector<bool> row;
            for (std::size_t p = 0; p < inst.size(); ++p) row.push_back(inst(family.balls[i].center, p) <= family.balls[i].radius);
            rows.push_back(std::move(row));
        }
    } else if (const auto* line = std::get_if<LineSweep>(&witness)) {
        const auto probes = line_probe_points(*line, family, subset);
        for (auto i : subset) {
            const double c = line->coords[family.balls[i].center];
            const double r = family.balls[i].radius;
            std::vector<bool> row;
            for (double x : probes) row.push_back(c - r <= x && x <= c + r);
            rows.push_back(std::move(row));
        }
    } else {
        const auto& hh = std::get<HedgehogSweep>(witness);
        const SpaceSpec spec = HedgehogSpace{hh.spines};
        const auto probes = hedgehog_probe_points(hh, family, subset);
        for (auto i : subset) {
            const PointCode c = hh.points[family.balls[i].center];
            std::vector<bool> row;
            for (const auto& p : probes) row.push_back(distance(spec, c, p) <= family.balls[i].radius);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

int pointwise_multiplicity(const FiniteMetricInstance& inst, const BallFamily& family, const std::vector<std::size_t>& subset,
                           const Witness& witness) {
    auto rows = membership(inst, family, subset, witness);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    int best = 0;
    if (rows.empty()) return 0;
    for (std::size_t p = 0; p < rows.front().size(); ++p) {
        int count = 0;
        for (const auto& row : rows) count += row[p];
        best = std::max(best, count);
    }
    return best;
}

bool covering_subfamily_exists(const FiniteMetricInstance& inst, const BallFamily& family, int delta, const Witness& witness) {
    const std::size_t m = family.balls.size();
    if (m > 20) throw CapacityError("oracle enumerates at most 20 balls");
    if (m == 0) return false;

    // Probe points of the whole family contain every endpoint of every
    // subfamily, so one membership table serves all subsets.
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    const auto rows = membership(inst, family, all, witness);
    const std::size_t probes = rows.front().size();

    std::vector<std::uint32_t> same_set(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (rows[i] == rows[j]) same_set[i] |= 1U << j;
    std::vector<std::uint32_t> at_probe(probes, 0);
    for (std::size_t p = 0; p < probes; ++p)
        for (std::size_t i = 0; i < m; ++i)
            if (rows[i][p]) at_probe[p] |= 1U << i;
    std::vector<std::uint32_t> covering(m, 0);
    for (std::size_t t = 0; t < m; ++t)
        for (std::size_t i = 0; i < m; ++i)
            if (inst(family.balls[i].center, family.balls[t].center) <= family.balls[i].radius) covering[t] |= 1U << i;

    for (std::uint32_t mask = 1; mask < (1U << m); ++mask) {
        bool covers = true;
        for (std::size_t t = 0; t < m && covers; ++t) covers = (covering[t] & mask) != 0;
        if (!covers) continue;
        int worst = 0;
        for (std::size_t p = 0; p < probes && worst <= delta + 1; ++p) {
            std::uint32_t left = at_probe[p] & mask;
            int distinct = 0;
            while (left != 0) {
                const int i = std::countr_zero(left);
                left &= ~same_set[i];
                ++distinct;
            }
            worst = std::max(worst, distinct);
        }
        if (worst <= delta + 1) return true;
    }
    return false;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m, double fm,
                double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 50);
}

}  // namespace knnlab::oracle

// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include "knnlab/nagata.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "knnlab/error.hpp"
#include "knnlab/rng.hpp"

namespace knnlab {

namespace {

using Interval = std::pair<double, double>;

// Closed-interval maximum overlap; starts sort before ends at equal abscissae.
int sweep_max_overlap(const std::vector<Interval>& intervals) {
    std::vector<std::pair<double, int>> events;
    events.reserve(2 * intervals.size());
    for (const auto& [lo, hi] : intervals) {
        events.emplace_back(lo, 0);
        events.emplace_back(hi, 1);
    }
    std::sort(events.begin(), events.end());
    int open = 0, best = 0;
    for (const auto& [x, kind] : events) {
        if (kind == 0)
            best = std::max(best, ++open);
        else
            --open;
    }
    return best;
}

// Set-level description of a closed ball, comparable for equality.
struct HedgehogBall {
    std::int64_t own_spine;  // -1 when the ball looks the same on every spine
    Interval own;
    double reach;  // extent along foreign spines, or -1 if the glue point is outside
    auto key() const { return std::make_tuple(own_spine, own.first, own.second, reach); }
};

HedgehogBall hedgehog_ball(const HedgehogPoint& c, double radius) {
    HedgehogBall b;
    b.own = {std::max(0.0, c.t - radius), std::min(1.0, c.t + radius)};
    b.reach = radius >= c.t ? std::min(1.0, radius - c.t) : -1.0;
    b.own_spine = (b.own.first == 0.0 && b.own.second == b.reach) ? -1 : c.spine;
    return b;
}

int hedgehog_multiplicity(std::int64_t spines, const std::vector<HedgehogBall>& balls) {
    std::set<std::int64_t> own_spines;
    for (const auto& b : balls)
        if (b.own_spine >= 0) own_spines.insert(b.own_spine);
    std::vector<std::int64_t> to_scan(own_spines.begin(), own_spines.end());
    if (static_cast<std::int64_t>(own_spines.size()) < spines) to_scan.push_back(-1);  // any spine owned by nobody
    int best = 0;
    for (auto spine : to_scan) {
        std::vector<Interval> on_spine;
        for (const auto& b : balls) {
            if (b.own_spine == spine && spine >= 0)
                on_spine.push_back(b.own);
            else if (b.reach >= 0.0)
                on_spine.emplace_back(0.0, b.reach);
        }
        best = std::max(best, sweep_max_overlap(on_spine));
    }
    return best;
}

using Bits = std::vector<std::uint64_t>;

Bits ball_contents(const FiniteMetricInstance& inst, const Ball& b) {
    Bits bits((inst.size() + 63) / 64, 0);
    for (std::size_t p = 0; p < inst.size(); ++p)
        if (inst(b.center, p) <= b.radius) bits[p / 64] |= std::uint64_t{1} << (p % 64);
    return bits;
}

// Per-family geometry bound to one witness.
class FamilyGeometry {
public:
    FamilyGeometry(const FiniteMetricInstance& inst, const BallFamily& family, const Witness& witness)
        : inst_(inst), witness_(witness) {
        const std::size_t m = family.balls.size();
        if (std::holds_alternative<FinitePoints>(witness)) {
            contents_.reserve(m);
            for (const auto& b : family.balls) contents_.push_back(ball_contents(inst, b));
        } else if (const auto* line = std::get_if<LineSweep>(&witness)) {
            for (const auto& b : family.balls) {
                const double c = line->coords[b.center];
                intervals_.emplace_back(c - b.radius, c + b.radius);
            }
        } else {
            const auto& hh = std::get<HedgehogSweep>(witness);
            for (const auto& b : family.balls) hedgehog_.push_back(hedgehog_ball(hh.points[b.center], b.radius));
        }
    }

    // True if balls i and j are the same subset of the ambient witness space.
    bool same_set(std::size_t i, std::size_t j) const {
        if (!contents_.empty()) return contents_[i] == contents_[j];
        if (!intervals_.empty()) return intervals_[i] == intervals_[j];
        return hedgehog_[i].key() == hedgehog_[j].key();
    }

    int multiplicity(const std::vector<std::size_t>& chosen) const {
        // Pairwise different elements only: drop repeated sets first.
        std::vector<std::size_t> distinct;
        for (auto i : chosen) {
            bool repeat = false;
            for (auto j : distinct) repeat = repeat || same_set(i, j);
            if (!repeat) distinct.push_back(i);
        }
        if (!contents_.empty()) {
            int best = 0;
            for (std::size_t p = 0; p < inst_.size(); ++p) {
                int count = 0;
                for (auto i : distinct) count += static_cast<int>((contents_[i][p / 64] >> (p % 64)) & 1U);
                best = std::max(best, count);
            }
            return best;
        }
        if (!intervals_.empty()) {
            std::vector<Interval> iv;
            for (auto i : distinct) iv.push_back(intervals_[i]);
            return sweep_max_overlap(iv);
        }
        std::vector<HedgehogBall> hb;
        for (auto i : distinct) hb.push_back(hedgehog_[i]);
        return hedgehog_multiplicity(std::get<HedgehogSweep>(witness_).spines, hb);
    }

    bool finite() const { return !contents_.empty(); }
    const Bits& contents(std::size_t i) const { return contents_[i]; }

private:
    const FiniteMetricInstance& inst_;
    const Witness& witness_;
    std::vector<Bits> contents_;
    std::vector<Interval> intervals_;
    std::vector<HedgehogBall> hedgehog_;
};

// Distinct centres of the family and, per ball, the mask of centres it covers.
struct Coverage {
    std::vector<std::size_t> centers;
    std::vector<std::uint64_t> masks;
    std::uint64_t all = 0;
};

Coverage coverage_of(const FiniteMetricInstance& inst, const BallFamily& family) {
    Coverage cov;
    for (const auto& b : family.balls)
        if (std::find(cov.centers.begin(), cov.centers.end(), b.center) == cov.centers.end()) cov.centers.push_back(b.center);
    if (cov.centers.size() > 64) throw CapacityError("more than 64 distinct centres in one family");
    for (const auto& b : family.balls) {
        std::uint64_t mask = 0;
        for (std::size_t c = 0; c < cov.centers.size(); ++c)
            if (inst(b.center, cov.centers[c]) <= b.radius) mask |= std::uint64_t{1} << c;
        cov.masks.push_back(mask);
    }
    cov.all = cov.centers.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cov.centers.size()) - 1;
    return cov;
}

// Indices of the first ball for every distinct set.
std::vector<std::size_t> distinct_balls(const FamilyGeometry& geo, std::size_t m) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m; ++i) {
        bool repeat = false;
        for (auto j : keep) repeat = repeat || geo.same_set(i, j);
        if (!repeat) keep.push_back(i);
    }
    return keep;
}

class SubfamilySearch {
public:
    SubfamilySearch(const FiniteMetricInstance& inst, const BallFamily& family, int delta, const Witness& witness)
        : inst_(inst), geo_(inst, family, witness), cov_(coverage_of(inst, family)), bound_(delta + 1) {
        order_ = distinct_balls(geo_, family.balls.size());
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return std::popcount(cov_.masks[a]) > std::popcount(cov_.masks[b]);
        });
        if (geo_.finite()) counts_.assign(inst.size(), 0);
    }

    std::optional<std::vector<std::size_t>> run() {
        if (dfs(0)) {
            auto out = chosen_;
            std::sort(out.begin(), out.end());
            return out;
        }
        return std::nullopt;
    }

private:
    bool fits(std::size_t b) {
        if (geo_.finite()) {
            const auto& bits = geo_.contents(b);
            for (std::size_t p = 0; p < inst_.size(); ++p)
                if (((bits[p / 64] >> (p % 64)) & 1U) && counts_[p] + 1 > bound_) return false;
            return true;
        }
        chosen_.push_back(b);
        const bool ok = geo_.multiplicity(chosen_) <= bound_;
        chosen_.pop_back();
        return ok;
    }

    void add(std::size_t b, int step) {
        if (!geo_.finite()) return;
        const auto& bits = geo_.contents(b);
        for (std::size_t p = 0; p < inst_.size(); ++p)
            if ((bits[p / 64] >> (p % 64)) & 1U) counts_[p] += step;
    }

    bool dfs(std::uint64_t covered) {
        if (covered == cov_.all) return true;
        const int target = std::countr_one(covered);
        const std::uint64_t target_bit = std::uint64_t{1} << target;
        for (auto b : order_) {
            if (!(cov_.masks[b] & target_bit)) continue;
            if (std::find(chosen_.begin(), chosen_.end(), b) != chosen_.end()) continue;
            if (!fits(b)) continue;
            chosen_.push_back(b);
            add(b, +1);
            if (dfs(covered | cov_.masks[b])) return true;
            add(b, -1);
            chosen_.pop_back();
        }
        return false;
    }

    const FiniteMetricInstance& inst_;
    FamilyGeometry geo_;
    Coverage cov_;
    int bound_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> chosen_;
    std::vector<int> counts_;
};

std::vector<double> realized_radii(const FiniteMetricInstance& inst, std::size_t center, double scale) {
    std::vector<double> radii;
    for (std::size_t p = 0; p < inst.size(); ++p)
        if (inst(center, p) < scale) radii.push_back(inst(center, p));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    return radii;
}

// Upper ends of the radius classes of one centre: the next realized distance
// above each realized radius, or the scale for the last class when finite.
std::vector<double> class_tops(const FiniteMetricInstance& inst, std::size_t center, double scale) {
    std::vector<double> all;
    for (std::size_t p = 0; p < inst.size(); ++p) all.push_back(inst(center, p));
    if (std::isfinite(scale)) all.push_back(scale);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<double> tops;
    for (std::size_t i = 1; i < all.size() && all[i - 1] < scale; ++i) tops.push_back(all[i]);
    return tops;
}

// Over a finite witness a closed ball only changes at realized distances, so
// those radii are enough. Over a continuum the multiplicity also depends on
// how far a radius sits inside its class, and the hardest member of a class
// [d, d') sits just below d'. That member is d' - eps, with eps below half the
// smallest gap between interval endpoints so no strict order is disturbed.
std::vector<std::vector<double>> candidate_radii(const FiniteMetricInstance& inst, const std::vector<std::size_t>& X,
                                                 double scale, const Witness& witness) {
    std::vector<std::vector<double>> radii;
    for (auto c : X) radii.push_back(realized_radii(inst, c, scale));
    if (std::holds_alternative<FinitePoints>(witness)) return radii;

    std::vector<double> marks{0.0, 1.0};
    for (std::size_t i = 0; i < X.size(); ++i) {
        auto values = class_tops(inst, X[i], scale);
        values.insert(values.end(), radii[i].begin(), radii[i].end());
        for (double v : values) {
            if (const auto* line = std::get_if<LineSweep>(&witness)) {
                marks.push_back(line->coords[X[i]] - v);
                marks.push_back(line->coords[X[i]] + v);
            } else {
                const double t = std::get<HedgehogSweep>(witness).points[X[i]].t;
                marks.push_back(t - v);
                marks.push_back(t + v);
                marks.push_back(v - t);
            }
            marks.push_back(v);
        }
    }
    std::sort(marks.begin(), marks.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < marks.size(); ++i)
        if (marks[i] > marks[i - 1]) gap = std::min(gap, marks[i] - marks[i - 1]);
    const double eps = gap / 4.0;

    for (std::size_t i = 0; i < X.size(); ++i) {
        const auto tops = class_tops(inst, X[i], scale);
        auto& r = radii[i];
        const std::size_t realized = r.size();
        for (std::size_t j = 0; j < realized && j < tops.size(); ++j) {
            const double below = tops[j] - eps;
            if (below > r[j] && below < tops[j]) r.push_back(below);
        }
        std::sort(r.begin(), r.end());
    }
    return radii;
}

std::string scale_text(double scale) { return std::isinf(scale) ? "inf" : format_double(scale); }

}  // namespace

std::string witness_name(const Witness& w) {
    switch (w.index()) {
        case 0: return "finite_points";
        case 1: return "line_sweep";
        default: return "hedgehog_sweep";
    }
}

void validate_witness(const FiniteMetricInstance& inst, const Witness& witness) {
    const std::size_t n = inst.size();
    auto check = [&](auto&& dist, const char* what) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (std::fabs(dist(i, j) - inst(i, j)) > 1e-12)
                    throw UsageError(std::string(what) + " witness does not reproduce instance distance (" +
                                     std::to_string(i) + ", " + std::to_string(j) + ")");
    };
    if (const auto* line = std::get_if<LineSweep>(&witness)) {
        if (line->coords.size() != n) throw UsageError("line witness needs one coordinate per instance point");
        check([&](std::size_t i, std::size_t j) { return std::fabs(line->coords[i] - line->coords[j]); }, "line");
    } else if (const auto* hh = std::get_if<HedgehogSweep>(&witness)) {
        if (hh->points.size() != n) throw UsageError("hedgehog witness needs one point per instance point");
        const SpaceSpec spec = HedgehogSpace{hh->spines};
        validate(spec);
        for (const auto& p : hh->points) validate_point(spec, p);
        check([&](std::size_t i, std::size_t j) { return distance(spec, hh->points[i], hh->points[j]); }, "hedgehog");
    }
}

void validate_family(const FiniteMetricInstance& inst, const BallFamily& family) {
    if (family.balls.empty()) throw UsageError("ball family is empty");
    if (!(family.scale > 0.0)) throw UsageError("scale must be positive");
    for (const auto& b : family.balls) {
        if (b.center >= inst.size()) throw UsageError("ball centre outside the instance");
        if (!(b.radius >= 0.0)) throw UsageError("ball radius must be non-negative");
        if (!(b.radius < family.scale)) throw UsageError("ball radius must be below the scale");
        if (!family.centers_subset.empty() &&
            std::find(family.centers_subset.begin(), family.centers_subset.end(), b.center) == family.centers_subset.end())
            throw UsageError("ball centre " + std::to_string(b.center) + " is not in the designated centre set");
    }
}

int multiplicity_of(const FiniteMetricInstance& inst, const BallFamily& family, const std::vector<std::size_t>& chosen,
                    const Witness& witness) {
    validate_witness(inst, witness);
    for (auto i : chosen)
        if (i >= family.balls.size()) throw UsageError("chosen ball index out of range");
    const FamilyGeometry geo(inst, family, witness);
    return geo.multiplicity(chosen);
}

int multiplicity(const FiniteMetricInstance& inst, const BallFamily& family, const Witness& witness) {
    validate_family(inst, family);
    std::vector<std::size_t> all(family.balls.size());
    std::iota(all.begin(), all.end(), 0);
    return multiplicity_of(inst, family, all, witness);
}

bool validate_certificate(const FiniteMetricInstance& inst, const BallFamily& family, int delta, const Witness& witness,
                          const Certificate& cert) {
    if (cert.chosen.empty()) return false;
    for (auto i : cert.chosen)
        if (i >= family.balls.size()) return false;
    for (const auto& target : family.balls) {
        const bool covered = std::any_of(cert.chosen.begin(), cert.chosen.end(), [&](std::size_t i) {
            const auto& b = family.balls[i];
            return inst(b.center, target.center) <= b.radius;
        });
        if (!covered) return false;
    }
    const int mult = multiplicity_of(inst, family, cert.chosen, witness);
    return mult <= delta + 1 && mult <= cert.multiplicity;
}

std::optional<Certificate> find_subfamily(const FiniteMetricInstance& inst, const BallFamily& family, int delta,
                                          const Witness& witness, bool allow_heuristic) {
    if (delta < 0) throw UsageError("delta must be non-negative");
    validate_family(inst, family);
    validate_witness(inst, witness);
    if (family.balls.size() > kExhaustiveFamilyLimit) {
        if (allow_heuristic) return greedy_subfamily(inst, family, delta, witness);
        throw CapacityError("family of " + std::to_string(family.balls.size()) + " balls exceeds the exhaustive bound of " +
                            std::to_string(kExhaustiveFamilyLimit));
    }
    SubfamilySearch search(inst, family, delta, witness);
    auto chosen = search.run();
    if (!chosen) return std::nullopt;
    Certificate cert{*chosen, multiplicity_of(inst, family, *chosen, witness)};
    return cert;
}

std::optional<Certificate> greedy_subfamily(const FiniteMetricInstance& inst, const BallFamily& family, int delta,
                                            const Witness& witness) {
    if (delta < 0) throw UsageError("delta must be non-negative");
    validate_family(inst, family);
    validate_witness(inst, witness);
    const FamilyGeometry geo(inst, family, witness);
    const auto cov = coverage_of(inst, family);
    const auto candidates = distinct_balls(geo, family.balls.size());
    std::vector<std::size_t> chosen;
    std::uint64_t covered = 0;
    while (covered != cov.all) {
        std::optional<std::size_t> pick;
        int pick_gain = 0, pick_total = 0;
        for (auto b : candidates) {
            const int gain = std::popcount(cov.masks[b] & ~covered);
            if (gain == 0) continue;
            const int total = std::popcount(cov.masks[b]);
            if (pick && (gain < pick_gain || (gain == pick_gain && total <= pick_total))) continue;
            chosen.push_back(b);
            const bool ok = geo.multiplicity(chosen) <= delta + 1;
            chosen.pop_back();
            if (!ok) continue;
            pick = b;
            pick_gain = gain;
            pick_total = total;
        }
        if (!pick) return std::nullopt;
        chosen.push_back(*pick);
        covered |= cov.masks[*pick];
    }
    std::sort(chosen.begin(), chosen.end());
    Certificate cert{chosen, geo.multiplicity(chosen)};
    if (!validate_certificate(inst, family, delta, witness, cert)) return std::nullopt;
    return cert;
}

DimensionVerdict check_dim_at_scale(const FiniteMetricInstance& inst, const std::vector<std::size_t>& centers, int delta,
                                    double scale, const SearchMode& mode, const Witness& witness) {
    if (centers.empty()) throw UsageError("centre set is empty");
    if (delta < 0) throw UsageError("delta must be non-negative");
    if (!(scale > 0.0)) throw UsageError("scale must be positive");
    for (auto c : centers)
        if (c >= inst.size()) throw UsageError("centre outside the instance");
    std::vector<std::size_t> X = centers;
    std::sort(X.begin(), X.end());
    X.erase(std::unique(X.begin(), X.end()), X.end());
    validate_witness(inst, witness);

    const auto radii = candidate_radii(inst, X, scale, witness);

    DimensionVerdict verdict;
    verdict.witness = witness_name(witness);

    // choice[i] == 0: centre i absent; otherwise radius radii[i][choice[i] - 1].
    auto family_for = [&](const std::vector<std::size_t>& choice) {
        BallFamily f;
        f.scale = scale;
        f.centers_subset = X;
        for (std::size_t i = 0; i < X.size(); ++i)
            if (choice[i] > 0) f.balls.push_back({X[i], radii[i][choice[i] - 1]});
        return f;
    };
    auto test = [&](const std::vector<std::size_t>& choice) {
        auto f = family_for(choice);
        ++verdict.families_checked;
        if (!find_subfamily(inst, f, delta, witness)) {
            verdict.holds = false;
            verdict.counterexample = std::move(f);
            return false;
        }
        return true;
    };

    if (std::holds_alternative<Exhaustive>(mode)) {
        if (X.size() > kExhaustiveCenterLimit)
            throw CapacityError("exhaustive mode supports at most " + std::to_string(kExhaustiveCenterLimit) + " centres");
        verdict.exhaustive = true;
        std::vector<std::size_t> choice(X.size(), 0);
        for (;;) {
            std::size_t i = 0;
            while (i < X.size() && choice[i] == radii[i].size()) choice[i++] = 0;
            if (i == X.size()) break;
            ++choice[i];
            if (!test(choice)) return verdict;
        }
        return verdict;
    }

    const auto& rnd = std::get<Randomized>(mode);
    if (X.size() > kExhaustiveFamilyLimit)
        throw CapacityError("randomized mode supports at most " + std::to_string(kExhaustiveFamilyLimit) + " centres");
    for (std::size_t trial = 0; trial < rnd.trials; ++trial) {
        Rng rng = Rng::substream(rnd.seed, {hash_label("nagata"), static_cast<std::uint64_t>(trial)});
        std::vector<std::size_t> choice(X.size(), 0);
        bool any = false;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (rng.bernoulli(0.5)) {
                choice[i] = 1 + static_cast<std::size_t>(rng.uniform_index(radii[i].size()));
                any = true;
            }
        }
        if (!any) {
            const auto i = static_cast<std::size_t>(rng.uniform_index(X.size()));
            choice[i] = 1 + static_cast<std::size_t>(rng.uniform_index(radii[i].size()));
        }
        if (!test(choice)) return verdict;
    }
    return verdict;
}

nlohmann::json to_json(const BallFamily& family) {
    nlohmann::json balls = nlohmann::json::array();
    for (const auto& b : family.balls) balls.push_back({{"center", b.center}, {"radius", b.radius}});
    return {{"scale", scale_text(family.scale)}, {"centers", family.centers_subset}, {"balls", balls}};
}

nlohmann::json to_json(const Certificate& cert) { return {{"chosen", cert.chosen}, {"multiplicity", cert.multiplicity}}; }

nlohmann::json to_json(const DimensionVerdict& v) {
    nlohmann::json j{{"verdict", v.holds ? "holds" : "counterexample"},
                     {"families_checked", v.families_checked},
                     {"exhaustive", v.exhaustive},
                     {"witness", v.witness}};
    if (v.counterexample) j["counterexample"] = to_json(*v.counterexample);
    return j;
}

}  // namespace knnlab

namespace knnlab {

BallFamily family_from_json(const nlohmann::json& j) {
    auto index = [](const nlohmann::json& v) {
        if (!v.is_number_unsigned()) throw UsageError("ball family indices must be non-negative integers");
        return v.get<std::size_t>();
    };
    try {
        BallFamily f;
        if (!j.is_object() || !j.contains("balls")) throw UsageError("ball family JSON needs a 'balls' list");
        for (const auto& [key, value] : j.items())
            if (key != "balls" && key != "scale" && key != "centers") throw UsageError("unknown ball family key '" + key + "'");
        for (const auto& b : j.at("balls")) f.balls.push_back({index(b.at("center")), b.at("radius").get<double>()});
        if (j.contains("scale")) {
            const auto& s = j["scale"];
            f.scale = s.is_string() ? parse_double(s.get<std::string>()) : s.get<double>();
        }
        if (j.contains("centers"))
            for (const auto& c : j.at("centers")) f.centers_subset.push_back(index(c));
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed ball family JSON: ") + e.what());
    }
}

}  // namespace knnlab

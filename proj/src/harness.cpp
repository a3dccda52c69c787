// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include "knnlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "knnlab/error.hpp"

namespace knnlab {

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

namespace {

KSchedule schedule_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "ceil_sqrt") return KSchedule::ceil_sqrt();
        if (s == "ceil_log") return KSchedule::ceil_log();
        throw UsageError("unknown k schedule '" + s + "'");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "fixed") return KSchedule::fixed(j.at("k").get<std::size_t>());
    return schedule_from_json(nlohmann::json(kind));
}

nlohmann::json schedule_to_json(const KSchedule& s) {
    switch (s.kind) {
        case KSchedule::Kind::Fixed: return {{"kind", "fixed"}, {"k", s.fixed_k}};
        case KSchedule::Kind::CeilSqrt: return "ceil_sqrt";
        case KSchedule::Kind::CeilLog: return "ceil_log";
    }
    return nullptr;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (!j.is_object()) throw UsageError("config must be a JSON object");
        static const std::vector<std::string> known{"problem", "n_grid",      "schedule",    "policy",
                                                    "R",       "M",           "master_seed", "parallelism",
                                                    "output_path", "record_timing"};
        for (const auto& [key, value] : j.items())
            if (std::find(known.begin(), known.end(), key) == known.end()) throw UsageError("unknown config key '" + key + "'");
        const auto& p = j.at("problem");
        if (p.is_string()) {
            c.problem.name = p.get<std::string>();
        } else {
            c.problem.name = p.at("name").get<std::string>();
            if (p.contains("params")) c.problem.params = p.at("params").get<std::map<std::string, double>>();
        }
        c.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
        if (j.contains("schedule")) c.schedule = schedule_from_json(j.at("schedule"));
        if (j.contains("policy")) c.policy = policy_from_string(j.at("policy").get<std::string>());
        if (j.contains("R")) c.repetitions = j.at("R").get<std::size_t>();
        if (j.contains("M")) c.test_draws = j.at("M").get<std::size_t>();
        if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("parallelism")) c.parallelism = j.at("parallelism").get<std::size_t>();
        if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
        if (j.contains("record_timing")) c.record_timing = j.at("record_timing").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed config: ") + e.what());
    }
    validate(c);
    return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    return {{"problem", {{"name", c.problem.name}, {"params", c.problem.params}}},
            {"n_grid", c.n_grid},
            {"schedule", schedule_to_json(c.schedule)},
            {"policy", to_string(c.policy)},
            {"R", c.repetitions},
            {"M", c.test_draws},
            {"master_seed", c.master_seed},
            {"parallelism", c.parallelism},
            {"output_path", c.output_path},
            {"record_timing", c.record_timing}};
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

void validate(const ExperimentConfig& c) {
    if (c.n_grid.empty()) throw UsageError("n_grid is empty");
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        if (c.n_grid[i] < 1) throw UsageError("n_grid entries must be positive");
        if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1]) throw UsageError("n_grid must be strictly increasing");
        c.schedule.k_for(c.n_grid[i]);
    }
    if (c.repetitions < 2) throw UsageError("R must be at least 2");
    if (c.test_draws < 1) throw UsageError("M must be at least 1");
    if (c.parallelism < 1) throw UsageError("parallelism must be at least 1");
    build_problem(c.problem.name, c.problem.params);
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.problem_name << ',' << r.n << ',' << r.k << ',' << r.R << ',' << r.M << ',' << format_double(r.err_mean)
            << ',' << format_double(r.err_sem) << ',' << format_double(r.bayes_error) << ','
            << format_double(r.excess_risk) << ',' << r.wall_ms << ',' << r.master_seed << '\n';
    }
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    write_rows(out, rows);
    return out.str();
}

std::vector<ResultRow> read_rows(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw UsageError("empty results CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw UsageError("unexpected results CSV header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (cells.size() != 11) throw UsageError("results row has " + std::to_string(cells.size()) + " fields");
        try {
            ResultRow r;
            r.problem_name = cells[0];
            r.n = std::stoull(cells[1]);
            r.k = std::stoull(cells[2]);
            r.R = std::stoull(cells[3]);
            r.M = std::stoull(cells[4]);
            r.err_mean = parse_double(cells[5]);
            r.err_sem = parse_double(cells[6]);
            r.bayes_error = parse_double(cells[7]);
            r.excess_risk = parse_double(cells[8]);
            r.wall_ms = std::stoll(cells[9]);
            r.master_seed = std::stoull(cells[10]);
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw UsageError("malformed results row: " + line);
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
    validate(config);
    const auto problem = build_problem(config.problem.name, config.problem.params);
    const double bayes = bayes_error(problem);
    EstimateOptions opts;
    opts.repetitions = config.repetitions;
    opts.test_draws = config.test_draws;
    opts.parallelism = config.parallelism;

    std::vector<ResultRow> rows;
    for (std::size_t n : config.n_grid) {
        const auto start = std::chrono::steady_clock::now();
        const auto est = estimate_error(problem, n, config.schedule, config.policy, config.master_seed, opts);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        ResultRow r;
        r.problem_name = problem.name;
        r.n = n;
        r.k = est.k;
        r.R = config.repetitions;
        r.M = config.test_draws;
        r.err_mean = est.err_mean;
        r.err_sem = est.err_sem;
        r.bayes_error = bayes;
        r.excess_risk = est.err_mean - bayes;
        r.wall_ms = config.record_timing ? std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() : 0;
        r.master_seed = config.master_seed;
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> run_and_write(const ExperimentConfig& config) {
    if (config.output_path.empty()) throw UsageError("config has no output_path");
    std::ofstream probe(config.output_path, std::ios::app);
    if (!probe) throw UsageError("output path '" + config.output_path + "' is not writable");
    probe.close();
    auto rows = run_experiment(config);
    std::ofstream out(config.output_path, std::ios::trunc);
    write_rows(out, rows);
    if (!out) throw UsageError("failed writing '" + config.output_path + "'");
    return rows;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

CheckReport check_consistency(std::vector<ResultRow> rows, double tol) {
    if (rows.size() < 2) throw UsageError("consistency check needs rows for at least two sample sizes");
    for (const auto& r : rows)
        if (r.problem_name != rows.front().problem_name) throw UsageError("consistency check mixes problems");
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return a.n < b.n; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].n == rows[i - 1].n) throw UsageError("consistency check has repeated n");

    std::ostringstream detail;
    bool pass = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double slack = 2.0 * rows[i].err_sem;
        if (rows[i].excess_risk > rows[i - 1].excess_risk + slack) {
            pass = false;
            detail << "excess risk rises from " << rows[i - 1].excess_risk << " (n=" << rows[i - 1].n << ") to "
                   << rows[i].excess_risk << " (n=" << rows[i].n << ") beyond slack " << slack << "; ";
        }
    }
    const auto& last = rows.back();
    if (!(last.excess_risk < tol)) {
        pass = false;
        detail << "excess risk " << last.excess_risk << " at n=" << last.n << " is not below " << tol;
    } else {
        detail << "excess risk " << last.excess_risk << " at n=" << last.n << " < " << tol;
    }
    return {pass, detail.str()};
}

double two_valued_error_floor(std::size_t k) { return 1.0 / 3.0 - std::exp(-static_cast<double>(k) / 18.0); }

CheckReport check_chernoff_bound(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw UsageError("chernoff check needs at least one row");
    for (const auto& r : rows)
        if (r.problem_name != "two_valued") throw UsageError("chernoff check applies to two_valued rows only");
    std::ostringstream detail;
    bool pass = true;
    for (const auto& r : rows) {
        const double bound = two_valued_error_floor(r.k) - 3.0 * r.err_sem;
        const bool ok = r.err_mean >= bound;
        pass = pass && ok;
        detail << "n=" << r.n << " k=" << r.k << ": err " << r.err_mean << (ok ? " >= " : " < ") << bound << "; ";
    }
    return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// Restriction
// ---------------------------------------------------------------------------

Subspace whole_space(const LearningProblem& problem) {
    return {"whole_space", [](const PointCode&) { return true; }, problem.spec, [](const PointCode& p) { return p; }};
}

Subspace cg_nonzero_atoms(const LearningProblem& problem) {
    if (!std::holds_alternative<CGIntervalSpace>(problem.spec)) throw UsageError("cg_nonzero_atoms needs a cg_interval problem");
    std::int64_t atoms = 0;
    for (const auto& wc : problem.mu.components)
        if (const auto* g = std::get_if<UniformGrid>(&wc.component)) atoms = g->atoms;
    if (atoms < 2) throw UsageError("cg problem has no grid component");
    return {"cg_nonzero_atoms",
            [](const PointCode& p) { return std::get<UnitIntervalPoint>(p).x != 0.0; },
            TwoValuedSpace{atoms, 2.0},
            [atoms](const PointCode& p) -> PointCode {
                const double x = std::get<UnitIntervalPoint>(p).x;
                return DiscretePoint{std::llround(x * static_cast<double>(atoms)) - 1};
            }};
}

Subspace hedgehog_spine(const LearningProblem& problem, std::int64_t spine) {
    const auto* h = std::get_if<HedgehogSpace>(&problem.spec);
    if (!h) throw UsageError("hedgehog_spine needs a hedgehog problem");
    if (spine < 0 || spine >= h->spines) throw UsageError("spine outside the hedgehog");
    return {"hedgehog_spine_" + std::to_string(spine),
            [spine](const PointCode& p) {
                const auto& hp = std::get<HedgehogPoint>(p);
                return hp.spine == spine || hp.t == 0.0;
            },
            EuclideanSpace{1},
            [](const PointCode& p) -> PointCode { return EuclideanPoint{{std::get<HedgehogPoint>(p).t}}; }};
}

namespace {

PointCode draw_inside(const LearningProblem& problem, const Subspace& y, Rng& rng) {
    constexpr std::size_t kMaxAttempts = 1'000'000;
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        auto p = draw_point(problem, rng);
        if (y.contains(p)) return p;
    }
    throw UsageError("subspace '" + y.name + "' carries no measurable mass (predicate selects an empty set)");
}

}  // namespace

RestrictionReport restriction_equivalence_test(const LearningProblem& problem, const Subspace& y, std::size_t n,
                                               std::size_t k, std::uint64_t seed, std::size_t queries,
                                               TieBreakPolicy policy) {
    validate(problem);
    validate(y.intrinsic);
    if (n < 1 || k < 1 || k > n) throw UsageError("restriction test needs 1 <= k <= n");
    Rng rng = Rng::substream(seed, {hash_label("restriction"), hash_label(y.name)});

    std::vector<PointCode> ambient_pts, intrinsic_pts;
    std::vector<std::uint8_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
        auto x = draw_inside(problem, y, rng);
        labels.push_back(rng.uniform01() < eval_eta(problem, x) ? 1 : 0);
        intrinsic_pts.push_back(y.to_intrinsic(x));
        ambient_pts.push_back(std::move(x));
    }
    const TrainingSet ambient(problem.spec, ambient_pts, labels);
    const TrainingSet intrinsic(y.intrinsic, intrinsic_pts, labels);

    RestrictionReport report;
    report.queries = queries;
    KnnWorkspace ws;
    for (std::size_t q = 0; q < queries; ++q) {
        const auto x = draw_inside(problem, y, rng);
        const auto xi = y.to_intrinsic(x);
        Rng a = Rng::substream(seed, {hash_label("restriction-query"), static_cast<std::uint64_t>(q)});
        Rng b = a;
        Rng pa = a;
        Rng pb = a;
        const auto na = select_neighbors(ambient, x, k, policy, a, ws);
        const auto nb = select_neighbors(intrinsic, xi, k, policy, b, ws);
        const int ya = predict(ambient, x, k, policy, pa, ws);
        const int yb = predict(intrinsic, xi, k, policy, pb, ws);
        if (na.indices == nb.indices && na.radius == nb.radius && ya == yb && a == b && pa == pb) ++report.agreed;
    }
    report.pass = report.agreed == report.queries;
    return report;
}

}  // namespace knnlab

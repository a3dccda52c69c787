// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "knnlab/acceptance.hpp"
#include "knnlab/error.hpp"
#include "knnlab/harness.hpp"
#include "knnlab/nagata.hpp"

namespace {

using namespace knnlab;

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::string output;
    std::size_t parallelism = 0;
    double consistency_tol = -1.0;
    bool chernoff = false;
};

int run_simulate(const SimulateArgs& a) {
    auto config = load_config(a.config);
    if (!a.output.empty()) config.output_path = a.output;
    if (a.parallelism > 0) config.parallelism = a.parallelism;
    const auto rows = run_and_write(config);
    std::cout << rows_to_csv(rows);
    int status = kPass;
    if (a.consistency_tol >= 0.0) {
        const auto r = check_consistency(rows, a.consistency_tol);
        std::cerr << "consistency: " << (r.pass ? "pass" : "fail") << " (" << r.detail << ")\n";
        if (!r.pass) status = kCheckFailure;
    }
    if (a.chernoff) {
        const auto r = check_chernoff_bound(rows);
        std::cerr << "chernoff: " << (r.pass ? "pass" : "fail") << " (" << r.detail << ")\n";
        if (!r.pass) status = kCheckFailure;
    }
    return status;
}

struct BayesArgs {
    std::string problem;
    std::vector<std::string> params;
};

int run_bayes(const BayesArgs& a) {
    std::map<std::string, double> params;
    for (const auto& p : a.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("parameter '" + p + "' is not key=value");
        params[p.substr(0, eq)] = parse_double(p.substr(eq + 1));
    }
    const auto problem = build_problem(a.problem, params);
    std::cout << format_double(bayes_error(problem)) << "\n";
    return kPass;
}

struct NagataArgs {
    std::string matrix;
    std::string centers;
    int delta = 0;
    std::string scale = "inf";
    std::string mode = "exhaustive";
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    std::string line_coords;
    std::int64_t hedgehog_spines = 0;
    std::string hedgehog_points;
    std::string family;
    bool heuristic = false;
};

Witness parse_witness(const NagataArgs& a) {
    if (!a.line_coords.empty() && a.hedgehog_spines > 0) throw UsageError("choose one witness geometry");
    if (!a.line_coords.empty()) {
        LineSweep line;
        for (const auto& c : split(a.line_coords, ',')) line.coords.push_back(parse_double(c));
        return line;
    }
    if (a.hedgehog_spines > 0) {
        HedgehogSweep hh{a.hedgehog_spines, {}};
        for (const auto& p : split(a.hedgehog_points, ',')) {
            const auto parts = split(p, ':');
            if (parts.size() != 2) throw UsageError("hedgehog point '" + p + "' is not spine:t");
            hh.points.push_back(make_hedgehog_point(static_cast<std::int64_t>(parse_double(parts[0])), parse_double(parts[1])));
        }
        return hh;
    }
    return FinitePoints{};
}

int run_nagata(const NagataArgs& a) {
    std::ifstream in(a.matrix);
    if (!in) throw UsageError("cannot read matrix '" + a.matrix + "'");
    const auto inst = read_csv(in);
    const auto witness = parse_witness(a);
    validate_witness(inst, witness);

    if (!a.family.empty()) {
        const auto family = family_from_json(read_json_file(a.family));
        validate_family(inst, family);
        const auto cert = find_subfamily(inst, family, a.delta, witness, a.heuristic);
        nlohmann::json out{{"witness", witness_name(witness)}, {"delta", a.delta}};
        if (cert) {
            out["result"] = "certificate";
            out["certificate"] = to_json(*cert);
        } else {
            out["result"] = family.balls.size() > kExhaustiveFamilyLimit ? "inconclusive" : "none";
        }
        std::cout << out.dump(2) << "\n";
        return cert ? kPass : kCheckFailure;
    }

    std::vector<std::size_t> centers;
    if (a.centers.empty() || a.centers == "all") {
        for (std::size_t i = 0; i < inst.size(); ++i) centers.push_back(i);
    } else {
        for (const auto& c : split(a.centers, ',')) {
            const double v = parse_double(c);
            if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) throw UsageError("bad centre index '" + c + "'");
            centers.push_back(static_cast<std::size_t>(v));
        }
    }
    SearchMode mode = Exhaustive{};
    if (a.mode == "randomized")
        mode = Randomized{a.trials, a.seed};
    else if (a.mode != "exhaustive")
        throw UsageError("mode must be 'exhaustive' or 'randomized'");
    const auto verdict = check_dim_at_scale(inst, centers, a.delta, parse_double(a.scale), mode, witness);
    std::cout << to_json(verdict).dump(2) << "\n";
    return verdict.holds ? kPass : kCheckFailure;
}

struct VerifyArgs {
    std::uint64_t seed = 0;
    std::string config;
    std::string report;
    std::size_t parallelism = 0;
};

int run_verify(const VerifyArgs& a) {
    VerifyOptions options;
    if (!a.config.empty()) options = verify_options_from_json(read_json_file(a.config));
    if (a.parallelism > 0) options.parallelism = a.parallelism;
    std::ostream& lines = a.report == "-" ? std::cerr : std::cout;
    VerifyReport report;
    report.seed = a.seed;
    std::vector<int> ids = options.criteria;
    if (ids.empty())
        for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
    for (int id : ids) {
        report.criteria.push_back(run_criterion(id, a.seed, options));
        lines << summary_line(report.criteria.back()) << std::endl;
    }
    lines << (report.pass() ? "verify: all criteria pass" : "verify: FAILED") << std::endl;
    if (a.report == "-") {
        std::cout << to_json(report).dump(2) << "\n";
    } else if (!a.report.empty()) {
        std::ofstream out(a.report);
        if (!out) throw UsageError("cannot write report '" + a.report + "'");
        out << to_json(report).dump(2) << "\n";
    }
    return report.pass() ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-NN learning in metric spaces: simulations, Bayes errors, Nagata dimension checks"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo error sweep from a JSON config and write CSV");
    simulate->add_option("--config", sim.config, "Experiment config (JSON)")->required();
    simulate->add_option("--output", sim.output, "Override output_path");
    simulate->add_option("--parallelism", sim.parallelism, "Override parallelism");
    simulate->add_option("--check-consistency", sim.consistency_tol, "Fail unless the rows pass the consistency check at this tolerance");
    simulate->add_flag("--check-chernoff", sim.chernoff, "Fail unless the rows respect the two-valued lower bound");

    BayesArgs bay;
    auto* bayes = app.add_subcommand("bayes", "Print the closed-form Bayes error of a named problem");
    bayes->add_option("--problem", bay.problem, "Problem name")->required();
    bayes->add_option("--param", bay.params, "Problem parameter key=value (repeatable)");

    NagataArgs nag;
    auto* nagata = app.add_subcommand("nagata", "Check Nagata dimension at a scale on a distance matrix");
    nagata->add_option("--matrix", nag.matrix, "Distance matrix CSV with a header row of point ids")->required();
    nagata->add_option("--centers", nag.centers, "Comma-separated centre indices, or 'all'");
    nagata->add_option("--delta", nag.delta, "Dimension bound delta")->required();
    nagata->add_option("--scale", nag.scale, "Scale (a number or 'inf')");
    nagata->add_option("--mode", nag.mode, "exhaustive or randomized");
    nagata->add_option("--trials", nag.trials, "Families sampled in randomized mode");
    nagata->add_option("--seed", nag.seed, "Seed for randomized mode");
    nagata->add_option("--line-coords", nag.line_coords, "Line witness: comma-separated coordinate per point");
    nagata->add_option("--hedgehog-spines", nag.hedgehog_spines, "Hedgehog witness: number of spines");
    nagata->add_option("--hedgehog-points", nag.hedgehog_points, "Hedgehog witness: spine:t per point, comma-separated");
    nagata->add_option("--family", nag.family, "Search a covering subfamily of this ball family (JSON) instead");
    nagata->add_flag("--heuristic", nag.heuristic, "Allow the greedy search above the exhaustive family limit");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--seed", ver.seed, "Master seed")->required();
    verify->add_option("--config", ver.config, "JSON overrides for the suite settings");
    verify->add_option("--report", ver.report, "Write the JSON report here ('-' for stdout)");
    verify->add_option("--parallelism", ver.parallelism, "Worker threads for Monte Carlo sweeps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*bayes) return run_bayes(bay);
        if (*nagata) return run_nagata(nag);
        return run_verify(ver);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

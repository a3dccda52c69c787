// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

// Runs acceptance criteria 1-9 at their published settings and prints one
// line per criterion. Usage: acceptance [seed] [report.json]

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "knnlab/acceptance.hpp"

int main(int argc, char** argv) {
    using namespace knnlab;
    const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : kDefaultVerifySeed;
    const VerifyOptions options;
    bool pass = true;
    VerifyReport report;
    report.seed = seed;
    std::cout << "acceptance suite, seed " << seed << std::endl;
    for (int id = 1; id <= kCriterionCount; ++id) {
        try {
            report.criteria.push_back(run_criterion(id, seed, options));
        } catch (const std::exception& e) {
            CriterionResult failed;
            failed.id = id;
            failed.title = criterion_title(id);
            failed.detail = std::string("threw: ") + e.what();
            report.criteria.push_back(failed);
        }
        pass = pass && report.criteria.back().pass;
        std::cout << summary_line(report.criteria.back()) << std::endl;
    }
    if (argc > 2) std::ofstream(argv[2]) << to_json(report).dump(2) << "\n";
    std::cout << (pass ? "ALL 9 CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return pass ? 0 : 1;
}

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace finorth::acceptance {

struct CheckResult {
    std::string id;
    bool pass = false;
    double value = 0.0;    // measured quantity, typically the worst deviation
    double expected = 0.0; // bound the value is held to
    double tol = 0.0;
    double runtime_ms = 0.0;
    std::string detail;
};

struct Config {
    double quad_tol = 1e-10; // weight-direct quadrature tolerance
    int jobs = 0;            // 0 = hardware concurrency (capped)
};

// Run the standard verification suite on its fixed parameter sets.  Each
// check carries its own pinned threshold; Config only tunes the quadrature
// tolerance and parallelism.
std::vector<CheckResult> run_all(const Config& config);

// Findings recorded while running (closed-vs-numeric verdicts and similar).
struct SuiteResult {
    std::vector<CheckResult> checks;
    std::vector<std::string> findings;
};

SuiteResult run_suite(const Config& config);

nlohmann::json report_json(const SuiteResult& result, const Config& config);

} // namespace finorth::acceptance

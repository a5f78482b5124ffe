// Runs the full verification suite and prints one pass/fail line per
// criterion; exit status 0 only if every criterion passes.

#include <cstdio>
#include <cstring>

#include "finorth/acceptance.hpp"

int main(int argc, char** argv) {
    finorth::acceptance::Config config;
    for (int i = 1; i < argc - 1; ++i) {
        if (std::strcmp(argv[i], "--jobs") == 0) config.jobs = std::atoi(argv[i + 1]);
        if (std::strcmp(argv[i], "--tol") == 0) config.quad_tol = std::atof(argv[i + 1]);
    }

    auto result = finorth::acceptance::run_suite(config);
    bool all = true;
    for (const auto& c : result.checks) {
        std::printf("%s %-28s value=%-12.4e tol=%-8.1e (%8.1f ms)  %s\n",
                    c.pass ? "PASS" : "FAIL", c.id.c_str(), c.value, c.tol, c.runtime_ms,
                    c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "ALL CRITERIA PASS" : "CRITERIA FAILED");
    return all ? 0 : 1;
}

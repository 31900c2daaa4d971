#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace padmm {

/// Test-build hooks that corrupt a constant before the inequality audits run,
/// proving the audits can fail. Never exposed through the CLI.
struct MutationHooks {
    double c5_factor = 1.0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteReport {
    std::vector<CriterionResult> criteria;
    int instance_count = 0;
    int run_count = 0;
    double matrix_runtime_seconds = 0.0;  // criterion-1 run battery
    double runtime_seconds = 0.0;         // whole suite

    bool all_pass() const;
    std::string markdown() const;
};

/// Runs the full battery: certified instances across both variants, the three
/// relaxation regimes and all schedule kinds, plus the inequality audits and
/// the rate checks.
SuiteReport acceptance_suite(std::uint64_t seed, const MutationHooks* hooks = nullptr);

}  // namespace padmm

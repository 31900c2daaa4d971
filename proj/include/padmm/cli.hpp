#pragma once

#include <iosfwd>
#include <string>

#include "padmm/config.hpp"

namespace padmm {

// Exit codes: 0 ok, 1 check/analysis failed, 2 usage/parse, 3 runtime failure.

/// Prints the constants bundle and pass/fail per admissibility condition for
/// the configured regime.
int cmd_check(const RunConfig& cfg, std::ostream& out);

/// Certifies (unless force), runs, writes the trace, prints a summary block.
int cmd_run(const RunConfig& cfg, bool force, std::ostream& out);

struct RatesOptions {
    int l0_lag = 2;
    bool has_f_star = false;
    double f_star = 0.0;
    std::string report_path;
};

/// Fits the Lojasiewicz exponent of a stored Tightened trace and checks the
/// rate envelopes.
int cmd_rates(const std::string& trace_path, const RatesOptions& opt, std::ostream& out);

}  // namespace padmm

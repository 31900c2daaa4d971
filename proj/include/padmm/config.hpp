#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "padmm/problems.hpp"
#include "padmm/solver.hpp"

namespace padmm {

/// Thrown on malformed configs; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed INI-style run configuration.
///
/// Grammar: `[section]` headers, `key = value` lines, `#`/`;` comments,
/// blank lines ignored. Sections: problem, solver, analysis, output.
struct RunConfig {
    // [problem]
    std::string generator = "quadratic_quadratic";  // or lasso | l0_least_squares | files
    int n = 1, m = 1;
    std::uint64_t seed = 0;
    double lambda = 1.0;
    int sparsity = 1;
    std::string a_file, b_mat_file, b_vec_file;  // generator = files
    std::string g_kind = "l1";                   // files: l1 | l0 | quadratic | zero

    // [solver]
    Variant variant = Variant::PADMM;
    double rho = 1.0;
    double r = 0.0;            // 0 means "use r_choice"
    std::string r_choice;      // "i" | "ii" | "iii"
    ScheduleKind schedule = ScheduleKind::Zero;
    double mu1 = 0.0;          // Constant: M1 = mu1 * Id
    double m2 = 0.0;           // Constant: M2 = m2 * Id
    double t = 0.0;            // ProxLinear: 0 means 1/(r ||A||^2)
    double gamma = 1.1;
    int max_iter = 1000;
    double diff_tol = 0.0;
    double kkt_tol = 0.0;
    MeritRegime regime = MeritRegime::Standard;
    std::string x_solver = "auto";

    // [analysis]
    bool rates = false;
    int l0_lag = 2;
    double window_fraction = 0.5;

    // [output]
    std::string trace_path = "trace.jsonl";
    std::string report_path;

    std::string raw_text;  // the config file as read, echoed into traces
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Materialized run inputs built from a config.
struct PreparedRun {
    TestProblem problem;
    SolverConfig solver;
};

PreparedRun prepare_run(const RunConfig& cfg);

}  // namespace padmm

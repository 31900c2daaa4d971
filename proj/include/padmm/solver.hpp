#pragma once

#include <string>
#include <vector>

#include "padmm/params.hpp"
#include "padmm/problem.hpp"

namespace padmm {

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

enum class XSolver { ProxForm, QuadraticClosedForm, LinearSystemCG };

const char* to_string(XSolver x);

struct StoppingRule {
    int max_iter = 1000;
    double diff_tol = 0.0;  // on ||dx|| + ||dz|| + ||dy||; 0 disables
    double kkt_tol = 0.0;   // on ||d^{k+1}||; 0 disables
};

struct SolverConfig {
    Variant variant = Variant::PADMM;
    double r = 1.0;
    double rho = 1.0;
    double gamma = 1.1;
    MetricSchedule schedule;
    XSolver x_solver = XSolver::QuadraticClosedForm;
    StoppingRule stopping;
    MeritRegime regime = MeritRegime::Standard;
    bool force_uncertified = false;
    Vec x0, z0, y0;  // empty -> zeros
    std::uint64_t seed = 0;
};

struct IterateState {
    int k = 0;
    Vec x, z, y;
    Vec x_prev, y_prev;
};

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

struct TraceRecord {
    int k = 0;
    Vec x, z, y;
    double dx = 0.0, dz = 0.0, dy = 0.0;  // difference norms vs previous record
    double lr = 0.0;                      // augmented Lagrangian
    double fk = 0.0;                      // merit (= lr at k = 0)
    double d_norm = 0.0;                  // subgradient residual of L_r
    double D_norm = 0.0;                  // subgradient residual of the merit
    double feas = 0.0;                    // ||Ax - z||
    // in-memory extras (not serialized)
    double stat_res = 0.0;  // x-step stationarity residual
};

struct Trace {
    MeritRegime regime = MeritRegime::Standard;
    ConstantsBundle constants;
    std::string status;  // "max_iter" | "diff_tol" | "kkt_tol" | "error: ..."
    bool certified = false;
    std::string config_echo;
    std::vector<TraceRecord> records;
};

// ---------------------------------------------------------------------------
// updates (z before x before y)
// ---------------------------------------------------------------------------

/// z^{k+1} = prox of g with parameter 1/(r + m2) at (r A x^k + y^k + m2 z^k)/(r + m2).
/// Requires M2^k = m2 Id (throws otherwise).
Vec z_step(const IterateState& s, const ProblemSpec& p, const SolverConfig& c);

Vec x_step_padmm(const IterateState& s, const Vec& z_new, const ProblemSpec& p,
                 const SolverConfig& c);

Vec x_step_pladmm(const IterateState& s, const Vec& z_new, const ProblemSpec& p,
                  const SolverConfig& c);

/// y^{k+1} = y^k + rho r (A x^{k+1} - z^{k+1}).
Vec y_step(const IterateState& s, const Vec& x_new, const Vec& z_new, const ProblemSpec& p,
           const SolverConfig& c);

IterateState step(const IterateState& s, const ProblemSpec& p, const SolverConfig& c);

/// Residual of the x-subproblem optimality condition at the produced iterate.
double x_stationarity_residual(const IterateState& s, const Vec& x_new, const Vec& z_new,
                               const ProblemSpec& p, const SolverConfig& c);

/// Certifies admissibility (unless force_uncertified), then iterates until
/// max_iter, diff_tol or kkt_tol. Diagnostics are evaluated inline; sub-step
/// failures abort with a partial trace and an "error: ..." status.
Trace run(const ProblemSpec& p, const SolverConfig& c);

}  // namespace padmm

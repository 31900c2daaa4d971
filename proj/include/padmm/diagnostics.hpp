#pragma once

#include <string>
#include <vector>

#include "padmm/solver.hpp"

namespace padmm {

// ---------------------------------------------------------------------------
// violations
// ---------------------------------------------------------------------------

struct Violation {
    std::string check;
    int k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// One line per violation: "check=<name> k=<k> lhs=<v> rhs=<v>".
std::string violations_to_text(const std::vector<Violation>& v);

// ---------------------------------------------------------------------------
// merit evaluation
// ---------------------------------------------------------------------------

/// g(z) + h(x) + <y, Ax - z> + r/2 ||Ax - z||^2; +inf when g(z) = +inf.
double augmented_lagrangian(const Vec& x, const Vec& z, const Vec& y, const ProblemSpec& p,
                            double r);

/// L_r + T_coef ||A*(y - y_prev)||^2 + X_coef ||x - x_prev||^2 with
/// (T_coef, X_coef) = (T0, C0/2) for Standard and (2 T0, C0) for Tightened.
double merit_F(const Vec& x, const Vec& z, const Vec& y, const Vec& x_prev, const Vec& y_prev,
               const ProblemSpec& p, const ConstantsBundle& c, MeritRegime regime);

// ---------------------------------------------------------------------------
// per-iteration inequality audits (all recompute from trace snapshots)
// ---------------------------------------------------------------------------

/// Merit descent: F_{k+1} + C0/4 ||dx||^2 + 1/2 ||dz||^2_{M2} (+ 1/(rho r) ||dy||^2
/// under Tightened) <= F_k, slack 1e-9 (1 + |F_k|), checked for k >= 1.
std::vector<Violation> descent_check(const Trace& t, const MetricSchedule& sched,
                                     const ConstantsBundle& c, MeritRegime regime);

/// The three iterate estimates (z-by-x, multiplier, y-by-x).
std::vector<Violation> iterate_estimates_check(const Trace& t, const ProblemSpec& p,
                                     const ConstantsBundle& c);

struct Subgradient {
    Vec d_x, d_z, d_y;
    double norm = 0.0;
};

struct SubgradientD {
    Vec D_x, D_z, D_y, D_xp, D_yp;
    double norm = 0.0;
};

/// Subgradient residual d^{k+1} of L_r from the (k -> k+1) transition.
Subgradient subgradient_d(const Vec& x0, const Vec& z0, const Vec& y0, const Vec& x1,
                          const Vec& z1, const Vec& y1, const ProblemSpec& p,
                          const ConstantsBundle& c, const MetricMatrix& m1,
                          const MetricMatrix& m2);

/// Five-block subgradient residual D^{k+1} of the merit; the y blocks carry
/// 2 T0 (Standard) or 4 T0 (Tightened) times AA* (y1 - y0).
SubgradientD subgradient_D(const Vec& x0, const Vec& z0, const Vec& y0, const Vec& x1,
                           const Vec& z1, const Vec& y1, const ProblemSpec& p,
                           const ConstantsBundle& c, const MetricMatrix& m1,
                           const MetricMatrix& m2, MeritRegime regime);

/// Same, reusing an already computed d^{k+1}.
SubgradientD subgradient_D_from(const Subgradient& d, const Vec& x0, const Vec& y0,
                                const Vec& x1, const Vec& y1, const ProblemSpec& p,
                                const ConstantsBundle& c, MeritRegime regime);

/// ||d^{k+1}|| <= C5 ||dx|| + C6 ||dz|| + C7 ||dy||, every transition.
std::vector<Violation> bound_check_d(const Trace& t, const ProblemSpec& p,
                                     const MetricSchedule& sched, const ConstantsBundle& c);

/// Standard: both the one-step bound (C8, C9, C10) and the three-step form
/// (C11, C12, C13). Tightened: the simplified bound with C14/C15/C16 (the
/// Delta-y budget includes the doubled T0 term of the Tightened merit).
std::vector<Violation> bound_check_D(const Trace& t, const ProblemSpec& p,
                                     const MetricSchedule& sched, const ConstantsBundle& c,
                                     MeritRegime regime);

// ---------------------------------------------------------------------------
// KKT / boundedness / summability
// ---------------------------------------------------------------------------

struct KktResidual {
    double stationarity = 0.0;  // ||A*y + grad h(x)||
    bool membership = false;    // y in dg(z) at tol
    double feasibility = 0.0;   // ||Ax - z||
};

KktResidual kkt_residual(const Vec& x, const Vec& z, const Vec& y, const ProblemSpec& p,
                         double tol);

enum class BoundednessScenario { BI, BII, None };

const char* to_string(BoundednessScenario s);

BoundednessScenario boundedness_precheck(const ProblemSpec& p);

struct SummabilityResult {
    double bound = 0.0;
    double actual = 0.0;
    bool ok = false;
};

/// Window-sum upper bound for sequences satisfying the three-lag recurrence
/// hypothesis; throws when c0 + c1 + c2 >= 1 in any component.
SummabilityResult summability_bound(const std::vector<Vec>& a, const Vec& c0, const Vec& c1,
                                    const Vec& c2, double delta_bar, int k_lo, int k_hi, int i);

}  // namespace padmm

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padmm/diagnostics.hpp"
#include "padmm/solver.hpp"

namespace padmm {

// ---------------------------------------------------------------------------
// merit error sequence E_k = F_k - F_*
// ---------------------------------------------------------------------------

enum class FStarMode { LastValue, Known };

struct ErrorSequence {
    std::vector<double> e;  // e[i] is E_{i + first_k}
    int first_k = 1;
    double f_star = 0.0;
    std::string source = "merit";
    bool stable_tail = true;  // LastValue: |F_K - F_{K-1}| small enough
};

ErrorSequence error_sequence(const Trace& t, FStarMode mode, double known_f_star = 0.0);

// ---------------------------------------------------------------------------
// recurrence and exponent fitting
// ---------------------------------------------------------------------------

struct RecurrenceResult {
    double c_e_max = 0.0;  // min over the tail of (e_{k-l0} - e_k) / e_k^{2 theta}
    bool ok = false;
    int window_lo = 0, window_hi = 0;  // indices actually used
};

/// Verifies e_{k-l0} - e_k >= C_e e_k^{2 theta} on the tail and returns the
/// largest admissible C_e. Zero values truncate the window.
RecurrenceResult verify_recurrence(const std::vector<double>& e, double theta, int l0,
                                   int tail_start);

struct RateFit {
    double theta_hat = 0.0;
    double c_e_hat = 0.0;
    int l0 = 1;
    int window_lo = 0, window_hi = 0;
    double residual = 0.0;  // RMS of the log-space fit errors
    bool finite_time = false;
    bool clamped = false;  // theta_hat hit [0.05, 0.95]; unclassifiable
};

/// Least-squares fit of log(e_{k-l0} - e_k) = log C_e + 2 theta log e_k.
/// window_lo < 0 selects the default window (last 50% of the strictly
/// decreasing positive tail). Throws when fewer than 10 points are usable.
RateFit fit_loj_exponent(const std::vector<double>& e, int l0, int window_lo = -1,
                         int window_hi = -1);

/// Checks the proof-chain envelopes of the rate lemma: geometric for
/// theta in (0,1/2], power (k - l0 + 1)^{-1/(2 theta - 1)} for theta in (1/2,1).
/// Indices are positions in e; the recurrence is assumed verified from k0.
std::vector<Violation> rate_envelope_check(const std::vector<double>& e, double theta,
                                           double c_e, int l0, int k0);

// ---------------------------------------------------------------------------
// iterate-level rate checks
// ---------------------------------------------------------------------------

struct IterateRateReport {
    bool available = false;  // requires Tightened regime and C17 > 0
    std::string reason;      // when unavailable
    double c_l_surrogate = 0.0;
    double c20 = 0.0, c21 = 0.0, c22 = 0.0;
    std::vector<Violation> violations;
    std::string decay_class;  // "geometric" | "power" | "stationary"
    double decay_ratio = 0.0;  // geometric: per-step ratio; power: exponent
    bool pass = false;
};

/// Envelope checks ||x^k - x_hat|| <= C20 max{sqrt(E_k), phi(E_k)} (and the y/z
/// analogues) on the tail, with phi(s) = C_L s^(1-theta)/(1-theta) using the
/// empirical surrogate C_L = max over the tail of E_k^theta / ||D^k||.
IterateRateReport iterate_rate_check(const Trace& t, const ErrorSequence& e, double theta,
                                     const ConstantsBundle& c);

/// theta_effective is the exponent the envelopes were synthesized with (the
/// fitted value, possibly snapped to 1/2); it drives the regime label.
std::string rate_report_text(const RateFit& fit, const RecurrenceResult& rec,
                             const std::vector<Violation>& envelope,
                             const IterateRateReport& ite, double theta_effective);

}  // namespace padmm

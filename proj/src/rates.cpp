#include "padmm/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace padmm {

// ---------------------------------------------------------------------------
// error sequence
// ---------------------------------------------------------------------------

ErrorSequence error_sequence(const Trace& t, FStarMode mode, double known_f_star) {
    if (t.records.size() < 2) {
        throw std::invalid_argument("error_sequence: trace too short");
    }
    ErrorSequence es;
    es.first_k = 1;
    const size_t last = t.records.size() - 1;
    if (mode == FStarMode::LastValue) {
        es.f_star = t.records[last].fk;
        const double prev = t.records[last - 1].fk;
        const double scale = 1.0 + std::fabs(es.f_star);
        es.stable_tail = std::fabs(es.f_star - prev) <= 1e-12 * scale;
    } else {
        es.f_star = known_f_star;
    }
    const double clip_scale = 1e-14 * (1.0 + std::fabs(es.f_star));
    es.e.reserve(last);
    for (size_t j = 1; j <= last; ++j) {
        double v = t.records[j].fk - es.f_star;
        if (v < 0.0) {
            if (v < -clip_scale && mode == FStarMode::LastValue) es.stable_tail = false;
            v = 0.0;
        }
        es.e.push_back(v);
    }
    return es;
}

// ---------------------------------------------------------------------------
// recurrence
// ---------------------------------------------------------------------------

RecurrenceResult verify_recurrence(const std::vector<double>& e, double theta, int l0,
                                   int tail_start) {
    if (l0 < 1) throw std::invalid_argument("verify_recurrence: l0 >= 1");
    RecurrenceResult res;
    const int n = static_cast<int>(e.size());
    int lo = std::max(tail_start, l0);
    int hi = n - 1;
    // zero values in the tail restrict the window
    for (int k = lo; k <= hi; ++k) {
        if (e[k] <= 0.0) {
            hi = k - 1;
            break;
        }
    }
    if (hi < lo) return res;
    res.window_lo = lo;
    res.window_hi = hi;
    double cmin = std::numeric_limits<double>::infinity();
    for (int k = lo; k <= hi; ++k) {
        const double ratio = (e[k - l0] - e[k]) / std::pow(e[k], 2.0 * theta);
        cmin = std::min(cmin, ratio);
    }
    res.c_e_max = cmin;
    res.ok = cmin > 0.0;
    return res;
}

// ---------------------------------------------------------------------------
// exponent fit
// ---------------------------------------------------------------------------

/// Longest strictly-decreasing strictly-positive prefix run of e.
static int usable_tail_end(const std::vector<double>& e) {
    const int n = static_cast<int>(e.size());
    int j = 0;
    while (j + 1 < n && e[j + 1] > 0.0 && e[j + 1] < e[j]) ++j;
    return j;  // e[0..j] strictly decreasing, e[j] > 0 (when j > 0)
}

RateFit fit_loj_exponent(const std::vector<double>& e, int l0, int window_lo, int window_hi) {
    if (l0 < 1) throw std::invalid_argument("fit_loj_exponent: l0 >= 1");
    RateFit fit;
    fit.l0 = l0;
    const int n = static_cast<int>(e.size());
    const int tail_end = usable_tail_end(e);
    // finite time means the decreasing tail terminates by reaching exact zero,
    // not by losing strict monotonicity at the rounding floor
    fit.finite_time = tail_end + 1 < n && e[tail_end + 1] == 0.0;
    if (window_lo < 0) {
        // default: last 50% of the strictly decreasing positive tail
        window_lo = std::max(l0, tail_end / 2);
        window_hi = tail_end;
    }
    if (window_hi < 0) window_hi = tail_end;
    window_lo = std::max(window_lo, l0);
    window_hi = std::min(window_hi, n - 1);

    std::vector<double> lx, ly;
    for (int k = window_lo; k <= window_hi; ++k) {
        const double ek = e[k];
        const double diff = e[k - l0] - ek;
        if (ek <= 0.0 || diff <= 0.0) continue;
        lx.push_back(std::log(ek));
        ly.push_back(std::log(diff));
    }
    if (lx.size() < 10) {
        throw std::invalid_argument("fit_loj_exponent: fewer than 10 usable tail points");
    }
    const size_t m = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = m * sxx - sx * sx;
    if (std::fabs(denom) < 1e-30) {
        throw std::invalid_argument("fit_loj_exponent: degenerate fit (constant e)");
    }
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double err = ly[i] - (intercept + slope * lx[i]);
        rss += err * err;
    }
    fit.theta_hat = 0.5 * slope;
    fit.c_e_hat = std::exp(intercept);
    fit.residual = std::sqrt(rss / m);
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    if (fit.theta_hat < 0.05) {
        fit.theta_hat = 0.05;
        fit.clamped = true;
    } else if (fit.theta_hat > 0.95) {
        fit.theta_hat = 0.95;
        fit.clamped = true;
    }
    return fit;
}

// ---------------------------------------------------------------------------
// envelopes (the proof-chain constants of the rate lemma)
// ---------------------------------------------------------------------------

std::vector<Violation> rate_envelope_check(const std::vector<double>& e, double theta,
                                           double c_e, int l0, int k0) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw std::invalid_argument("rate_envelope_check: theta in (0,1)");
    }
    if (c_e <= 0.0) throw std::invalid_argument("rate_envelope_check: C_e > 0");
    std::vector<Violation> out;
    const int n = static_cast<int>(e.size());
    if (n == 0) return out;
    const double e0 = e[0];
    if (e0 <= 0.0) return out;  // already converged

    if (theta <= 0.5) {
        const double growth = c_e * std::pow(e0, 2.0 * theta - 1.0) + 1.0;
        const double q = std::pow(1.0 / growth, 1.0 / l0);
        const double ce0 = e0 * std::pow(growth, static_cast<double>(k0) / l0 + 1.0);
        for (int k = k0 + l0; k < n; ++k) {
            const double env = ce0 * std::pow(q, k);
            if (e[k] > env * (1.0 + 1e-9)) {
                out.push_back({"rate_envelope_geometric", k, e[k], env});
            }
        }
    } else {
        const double nu = std::pow(2.0, -1.0 / (2.0 * theta));
        const double c1p = (2.0 * theta - 1.0) * c_e / 2.0;
        const double c2p = (std::pow(nu, 1.0 - 2.0 * theta) - 1.0) *
                           std::pow(e0, 2.0 * theta - 1.0);
        const double cp = std::min(c1p, c2p);
        const double expo = -1.0 / (2.0 * theta - 1.0);
        const double coef = std::pow(cp / l0, expo);
        for (int k = k0 + l0; k < n; ++k) {
            const double env = coef * std::pow(static_cast<double>(k - l0 + 1), expo);
            if (e[k] > env * (1.0 + 1e-9)) {
                out.push_back({"rate_envelope_power", k, e[k], env});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// iterate-level envelopes
// ---------------------------------------------------------------------------

IterateRateReport iterate_rate_check(const Trace& t, const ErrorSequence& es, double theta,
                                     const ConstantsBundle& c) {
    IterateRateReport rep;
    if (t.regime != MeritRegime::Tightened) {
        rep.reason = "trace is not a tightened-regime run";
        return rep;
    }
    if (!c.rate_constants_available()) {
        rep.reason = "C17 = 0 (C0 vanishes); iterate rate constants unavailable";
        return rep;
    }
    if (t.records.size() < 4) {
        rep.reason = "trace too short";
        return rep;
    }
    rep.available = true;
    rep.c20 = *c.C20;
    rep.c21 = *c.C21;
    rep.c22 = *c.C22;

    const TraceRecord& last = t.records.back();
    const Vec& x_hat = last.x;
    const Vec& z_hat = last.z;
    const Vec& y_hat = last.y;

    // usable tail of the error sequence
    const int tail_end = usable_tail_end(es.e);
    const int tail_lo = std::max(1, tail_end / 2);

    // empirical Lojasiewicz surrogate: max of E_k^theta / ||D^k|| over the tail
    double cl = 0.0;
    for (int i = tail_lo; i <= tail_end; ++i) {
        const size_t rec = static_cast<size_t>(i + es.first_k);
        if (rec >= t.records.size()) break;
        const double dn = t.records[rec].D_norm;
        if (es.e[i] > 0.0 && dn > 0.0) {
            cl = std::max(cl, std::pow(es.e[i], theta) / dn);
        }
    }
    rep.c_l_surrogate = cl;
    const auto phi = [&](double s) {
        return s > 0.0 ? cl * std::pow(s, 1.0 - theta) / (1.0 - theta) : 0.0;
    };

    std::vector<double> dist_x_log, dist_k;
    for (int i = tail_lo; i <= tail_end; ++i) {
        const size_t rec = static_cast<size_t>(i + es.first_k);
        if (rec + 1 >= t.records.size()) break;  // the limit itself is excluded
        const double ek = es.e[i];
        if (ek <= 0.0) break;
        const double env = std::max(std::sqrt(ek), phi(ek));
        const double dxh = norm(sub(t.records[rec].x, x_hat));
        const double dyh = norm(sub(t.records[rec].y, y_hat));
        const double dzh = norm(sub(t.records[rec].z, z_hat));
        const int k = t.records[rec].k;
        if (dxh > rep.c20 * env * (1.0 + 1e-9)) {
            rep.violations.push_back({"iterate_envelope_x", k, dxh, rep.c20 * env});
        }
        if (dyh > rep.c21 * env * (1.0 + 1e-9)) {
            rep.violations.push_back({"iterate_envelope_y", k, dyh, rep.c21 * env});
        }
        if (i > 0 && es.e[i - 1] > 0.0) {
            const double envm = std::max(std::sqrt(es.e[i - 1]), phi(es.e[i - 1]));
            if (dzh > rep.c22 * envm * (1.0 + 1e-9)) {
                rep.violations.push_back({"iterate_envelope_z", k, dzh, rep.c22 * envm});
            }
        }
        if (dxh > 0.0) {
            dist_x_log.push_back(std::log(dxh));
            dist_k.push_back(static_cast<double>(k));
        }
    }

    // decay classification of ||x^k - x_hat||
    if (dist_x_log.size() < 5) {
        rep.decay_class = "stationary";
        rep.decay_ratio = 0.0;
    } else {
        const size_t m = dist_x_log.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const bool geometric = theta <= 0.5;
        for (size_t i = 0; i < m; ++i) {
            const double xi = geometric ? dist_k[i] : std::log(dist_k[i] - 1.0);
            sx += xi;
            sy += dist_x_log[i];
            sxx += xi * xi;
            sxy += xi * dist_x_log[i];
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        if (geometric) {
            rep.decay_class = "geometric";
            rep.decay_ratio = std::exp(slope);
        } else {
            rep.decay_class = "power";
            rep.decay_ratio = -slope;  // fitted exponent of (k-1)^-p
        }
    }
    rep.pass = rep.violations.empty();
    return rep;
}

std::string rate_report_text(const RateFit& fit, const RecurrenceResult& rec,
                             const std::vector<Violation>& envelope,
                             const IterateRateReport& ite, double theta_effective) {
    std::ostringstream os;
    char buf[40];
    auto kv = [&](const char* k, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << k << " = " << buf << "\n";
    };
    kv("theta_hat", fit.theta_hat);
    kv("C_e_hat", fit.c_e_hat);
    os << "l0 = " << fit.l0 << "\n";
    os << "window = [" << fit.window_lo << ", " << fit.window_hi << "]\n";
    kv("fit_residual", fit.residual);
    const char* regime = fit.finite_time ? "finite"
                         : fit.clamped   ? "unclassifiable"
                         : theta_effective <= 0.5 ? "linear"
                                                  : "sublinear";
    os << "regime = " << regime << "\n";
    os << "finite_time = " << (fit.finite_time ? "true" : "false") << "\n";
    kv("C_e_max", rec.c_e_max);
    os << "recurrence_ok = " << (rec.ok ? "true" : "false") << "\n";
    os << "envelope_ok = " << (envelope.empty() ? "true" : "false") << "\n";
    os << "envelope_violations = " << envelope.size() << "\n";
    if (ite.available) {
        kv("C_L_surrogate", ite.c_l_surrogate);
        kv("C20", ite.c20);
        kv("C21", ite.c21);
        kv("C22", ite.c22);
        os << "iterate_envelope_ok = " << (ite.pass ? "true" : "false") << "\n";
        os << "decay_class = " << ite.decay_class << "\n";
        kv("decay_ratio", ite.decay_ratio);
    } else {
        os << "iterate_rates = unavailable (" << ite.reason << ")\n";
    }
    return os.str();
}

}  // namespace padmm

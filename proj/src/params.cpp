#include "padmm/params.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace padmm {

const char* to_string(Variant v) { return v == Variant::PADMM ? "padmm" : "pladmm"; }

const char* to_string(MeritRegime r) {
    return r == MeritRegime::Standard ? "standard" : "tightened";
}

const char* to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::ProxLinear: return "proxlinear";
        default: return "zero";
    }
}

// ---------------------------------------------------------------------------
// MetricSchedule
// ---------------------------------------------------------------------------

MetricSchedule MetricSchedule::zero(int n, int m) {
    MetricSchedule s;
    s.kind_ = ScheduleKind::Zero;
    s.m1_ = MetricMatrix::zero(n);
    s.m2_ = MetricMatrix::zero(m);
    return s;
}

MetricSchedule MetricSchedule::constant(MetricMatrix m1, MetricMatrix m2) {
    if (!loewner_check(m1, 0.0) || !loewner_check(m2, 0.0)) {
        throw std::invalid_argument("MetricSchedule::constant: metrics must be PSD");
    }
    MetricSchedule s;
    s.kind_ = ScheduleKind::Constant;
    s.mu1_ = m1.spectral_norm();
    s.mu2_ = m2.spectral_norm();
    s.m1_ = std::move(m1);
    s.m2_ = std::move(m2);
    return s;
}

MetricSchedule MetricSchedule::prox_linear(const LinearMap& a, double r, double t) {
    if (t <= 0.0 || r <= 0.0) {
        throw std::invalid_argument("MetricSchedule::prox_linear: t, r > 0");
    }
    const double na = a.op_norm();
    if (t * r * na * na > 1.0 + 1e-12) {
        throw std::invalid_argument("MetricSchedule::prox_linear: t r ||A||^2 <= 1 violated");
    }
    const int n = a.cols();
    Matrix m1 = mat_scale(-r, a.matrix().gram());
    for (int i = 0; i < n; ++i) m1(i, i) += 1.0 / t;
    MetricSchedule s;
    s.kind_ = ScheduleKind::ProxLinear;
    s.m1_ = MetricMatrix(std::move(m1));
    s.m2_ = MetricMatrix::zero(a.rows());
    s.mu1_ = s.m1_.spectral_norm();
    s.mu2_ = 0.0;
    s.t_ = t;
    return s;
}

const MetricMatrix& MetricSchedule::m1(int) const { return m1_; }
const MetricMatrix& MetricSchedule::m2(int) const { return m2_; }

double MetricSchedule::t() const {
    if (kind_ != ScheduleKind::ProxLinear) {
        throw std::logic_error("MetricSchedule::t: not a prox-linear schedule");
    }
    return t_;
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

std::pair<double, double> relaxation_constants(double rho, double r, double lam_min_aat) {
    if (!(rho > 0.0 && rho < 2.0)) throw std::invalid_argument("relaxation_constants: rho in (0,2)");
    if (!(r > 0.0)) throw std::invalid_argument("relaxation_constants: r > 0");
    if (!(lam_min_aat > 0.0)) {
        throw std::invalid_argument("relaxation_constants: lambda_min(AA*) > 0 (A surjective)");
    }
    double t0, t1;
    if (rho <= 1.0) {
        t0 = (1.0 - rho) / (lam_min_aat * rho * rho * r);
        t1 = 1.0 / (lam_min_aat * rho);
    } else {
        t0 = (rho - 1.0) / (lam_min_aat * (2.0 - rho) * rho * r);
        t1 = rho / (lam_min_aat * (2.0 - rho) * (2.0 - rho));
    }
    return {t0, t1};
}

VariantConstants variant_constants(double L, double mu1, double r, double T1, Variant v) {
    VariantConstants c{};
    const double lm = L + mu1;
    if (v == Variant::PADMM) {
        c.C0 = 4.0 * T1 * mu1 * mu1 / r;
        c.C1 = L + 4.0 * T1 * lm * lm / r;
        c.C2 = 1.0;
        c.CM = (6.0 * mu1 * mu1 + 4.0 * lm * lm) * T1;
        c.CM_prime = (10.0 * mu1 * mu1 + 8.0 * lm * lm) * T1;
    } else {
        c.C0 = 4.0 * T1 * lm * lm / r;
        c.C1 = L + 4.0 * T1 * mu1 * mu1 / r;
        c.C2 = 0.0;
        c.CM = (4.0 * mu1 * mu1 + 6.0 * lm * lm) * T1;
        c.CM_prime = (8.0 * mu1 * mu1 + 10.0 * lm * lm) * T1;
    }
    return c;
}

ConstantsBundle compute_constants(Variant v, double rho, double r, double gamma, double L,
                                  double mu1, double mu2, const LinearMap& a,
                                  std::optional<double> loja_constant) {
    ConstantsBundle b;
    b.variant = v;
    b.rho = rho;
    b.r = r;
    b.gamma = gamma;
    b.L = L;
    b.mu1 = mu1;
    b.mu2 = mu2;
    b.lambda_min_aat = a.lambda_min_AAt();
    b.lambda_min_ata = a.lambda_min_AtA();
    b.norm_A = a.op_norm();
    b.loja_constant = loja_constant;

    const auto [t0, t1] = relaxation_constants(rho, r, b.lambda_min_aat);
    b.T0 = t0;
    b.T1 = t1;
    const auto vc = variant_constants(L, mu1, r, t1, v);
    b.C0 = vc.C0;
    b.C1 = vc.C1;
    b.C2 = vc.C2;
    b.CM = vc.CM;
    b.CM_prime = vc.CM_prime;

    const double sql = std::sqrt(b.lambda_min_aat);
    const double shrink = 1.0 - std::fabs(1.0 - rho);  // in (0,1]
    const double denom = sql * shrink;
    if (v == Variant::PADMM) {
        b.C3 = rho * (L + mu1) / denom;
        b.C4 = rho * mu1 / denom;
    } else {
        b.C3 = rho * mu1 / denom;
        b.C4 = rho * (L + mu1) / denom;
    }
    b.T2 = std::fabs(1.0 - rho) / denom;

    b.C5 = b.C2 * L + mu1 + r * b.norm_A;
    b.C6 = mu2;
    b.C7 = 1.0 + b.norm_A + 1.0 / (rho * r);
    b.C8 = b.C5 + 2.0 * b.C0;
    b.C9 = b.C6;
    b.C10 = b.C7 + 4.0 * b.T0 * b.norm_A * b.norm_A;

    const double rr = rho * r;
    const double e1 = b.C8 + b.C9 * b.norm_A + b.C3 * b.C10 + b.C3 * b.C9 / rr;
    const double e2 = b.C4 * b.C10 + b.C3 * b.C9 / rr;
    const double e3 = b.C4 * b.C9 / rr;
    b.C11 = std::max(e1, std::max(e2, e3));
    b.C12 = (b.C10 + b.C9 / rr) * b.T2;
    b.C13 = b.C9 * b.T2 / rr;

    b.C14 = b.C8 + b.C9 * b.norm_A;
    b.C15 = b.C10 + b.C9 / rr;
    b.C16 = b.C9 / rr;
    b.C17 = 0.5 * std::min(b.C0 / 4.0, 1.0 / rr);

    if (b.C17 > 0.0) {
        const double sq = std::sqrt(b.C17);
        b.C20 = 7.0 / sq + 1.0 / b.C17;
        b.C21 = 7.0 / (2.0 * sq) + 1.0 / (2.0 * b.C17);
        b.C22 = *b.C20 * b.norm_A + 2.0 * *b.C21 / rr;
    }
    if (loja_constant) {
        const double cl = *loja_constant;
        const double mx = std::max(b.C14, b.C15);
        if (b.C17 > 0.0 && cl > 0.0 && mx > 0.0) {
            b.C19 = std::min(b.C0 / 4.0, 1.0 / rr) / (3.0 * cl * cl * mx * mx);
        }
        if (b.C0 > 0.0 && cl > 0.0 && b.C11 > 0.0) {
            b.C23 = b.C0 / (12.0 * cl * cl * b.C11 * b.C11);
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// admissibility reports
// ---------------------------------------------------------------------------

bool AdmissibilityReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

static void emit_kv(std::ostringstream& os, const char* key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << key << " = " << buf << "\n";
}

std::string AdmissibilityReport::to_text() const {
    std::ostringstream os;
    const ConstantsBundle& c = constants;
    os << "variant = " << to_string(c.variant) << "\n";
    emit_kv(os, "rho", c.rho);
    emit_kv(os, "r", c.r);
    emit_kv(os, "gamma", c.gamma);
    emit_kv(os, "L", c.L);
    emit_kv(os, "mu1", c.mu1);
    emit_kv(os, "mu2", c.mu2);
    emit_kv(os, "norm_A", c.norm_A);
    emit_kv(os, "lambda_min_AAt", c.lambda_min_aat);
    emit_kv(os, "lambda_min_AtA", c.lambda_min_ata);
    emit_kv(os, "T0", c.T0);
    emit_kv(os, "T1", c.T1);
    emit_kv(os, "T2", c.T2);
    emit_kv(os, "C0", c.C0);
    emit_kv(os, "C1", c.C1);
    emit_kv(os, "C2", c.C2);
    emit_kv(os, "C_M", c.CM);
    emit_kv(os, "C_M_prime", c.CM_prime);
    emit_kv(os, "C3", c.C3);
    emit_kv(os, "C4", c.C4);
    emit_kv(os, "C5", c.C5);
    emit_kv(os, "C6", c.C6);
    emit_kv(os, "C7", c.C7);
    emit_kv(os, "C8", c.C8);
    emit_kv(os, "C9", c.C9);
    emit_kv(os, "C10", c.C10);
    emit_kv(os, "C11", c.C11);
    emit_kv(os, "C12", c.C12);
    emit_kv(os, "C13", c.C13);
    emit_kv(os, "C14", c.C14);
    emit_kv(os, "C15", c.C15);
    emit_kv(os, "C16", c.C16);
    emit_kv(os, "C17", c.C17);
    if (c.C19) emit_kv(os, "C19", *c.C19);
    if (c.C20) emit_kv(os, "C20", *c.C20);
    if (c.C21) emit_kv(os, "C21", *c.C21);
    if (c.C22) emit_kv(os, "C22", *c.C22);
    if (c.C23) emit_kv(os, "C23", *c.C23);
    if (!c.rate_constants_available()) os << "rate_constants = unavailable\n";
    for (const auto& chk : checks) {
        os << "check." << chk.name;
        if (chk.k >= 0) os << ".k" << chk.k;
        os << " = " << (chk.pass ? "pass" : "fail");
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", chk.slack);
        os << " slack=" << buf << "\n";
    }
    return os.str();
}

static AdmissibilityReport check_assumption_impl(const MetricSchedule& sched,
                                                 const LinearMap& a, double r, double rho,
                                                 double L, double gamma,
                                                 const std::vector<int>& sample_ks, Variant v,
                                                 bool strengthened) {
    if (!(gamma > 1.0)) throw std::invalid_argument("check_assumption: gamma > 1 required");
    AdmissibilityReport rep;
    rep.constants = compute_constants(v, rho, r, gamma, L, sched.mu1(), sched.mu2(), a);
    const ConstantsBundle& c = rep.constants;

    {
        AdmissibilityCheck chk;
        chk.name = "r_lower_bound";
        chk.slack = r - (2.0 + gamma) * c.T1 * L;
        chk.pass = chk.slack >= -1e-10 * std::max(1.0, r);
        rep.checks.push_back(chk);
    }

    // metric positivity per sampled k; the scale-invariant form compares
    // lambda_min(2 M1 + r A*A) against L + C_M/r (or C_M'/r). All supported
    // schedule kinds are constant in k, so a single eigensolve covers the
    // sampled set.
    const double cm = strengthened ? c.CM_prime : c.CM;
    const double threshold = L + cm / r;
    const std::vector<int> ks = sample_ks.empty() ? std::vector<int>{0} : sample_ks;
    const Matrix raa = mat_scale(r, a.matrix().gram());
    Matrix m3 = mat_add(mat_scale(2.0, sched.m1(ks.front()).matrix()), raa);
    double scale = std::max(1.0, threshold);
    for (int i = 0; i < m3.rows; ++i) scale = std::max(scale, std::fabs(m3(i, i)));
    AdmissibilityCheck chk;
    chk.name = strengthened ? "metric_positivity_strengthened" : "metric_positivity";
    chk.k = ks.front();
    chk.slack = sym_eig_min(m3) - threshold;
    chk.pass = chk.slack >= -1e-10 * scale;
    rep.checks.push_back(chk);
    return rep;
}

AdmissibilityReport check_assumption1(const MetricSchedule& sched, const LinearMap& a,
                                      double r, double rho, double L, double gamma,
                                      const std::vector<int>& sample_ks, Variant v) {
    return check_assumption_impl(sched, a, r, rho, L, gamma, sample_ks, v, false);
}

AdmissibilityReport check_assumption2(const MetricSchedule& sched, const LinearMap& a,
                                      double r, double rho, double L, double gamma,
                                      const std::vector<int>& sample_ks, Variant v) {
    return check_assumption_impl(sched, a, r, rho, L, gamma, sample_ks, v, true);
}

// ---------------------------------------------------------------------------
// suggest_r
// ---------------------------------------------------------------------------

double suggest_r(RChoice choice, const SuggestRInputs& in) {
    if (!(in.gamma > 1.0)) throw std::invalid_argument("suggest_r: gamma > 1");
    const auto [t0, t1] = relaxation_constants(in.rho, 1.0, in.lambda_min_aat);
    (void)t0;  // T1 is r-free in both branches
    const double base = (2.0 + in.gamma) * t1 * in.L;
    const auto vc = variant_constants(in.L, in.mu1, 1.0, t1, in.variant);
    const double cm = in.strengthened ? vc.CM_prime : vc.CM;
    switch (choice) {
        case RChoice::I: {
            if (!(in.mu1 > in.L / 2.0)) {
                throw std::invalid_argument("suggest_r(I): requires mu1 > L/2");
            }
            return std::max(base, cm / (2.0 * in.mu1 - in.L));
        }
        case RChoice::II: {
            if (!(in.t > 0.0 && in.t < 1.0 / std::max(in.L, 1e-300))) {
                throw std::invalid_argument("suggest_r(II): requires 0 < t < 1/L");
            }
            return std::max(base, in.t * cm / (1.0 - in.t * in.L));
        }
        case RChoice::III: {
            if (!(in.lambda_min_ata > 0.0)) {
                throw std::invalid_argument("suggest_r(III): requires lambda_min(A*A) > 0");
            }
            const double disc = in.L * in.L + 4.0 * in.lambda_min_ata * cm;
            return std::max(base, (in.L + std::sqrt(disc)) / (2.0 * in.lambda_min_ata));
        }
    }
    throw std::logic_error("suggest_r: unreachable");
}

MetricSchedule make_schedule(ScheduleKind kind, const LinearMap& a, double r, double t,
                             const MetricMatrix& m1, const MetricMatrix& m2) {
    switch (kind) {
        case ScheduleKind::Zero: return MetricSchedule::zero(a.cols(), a.rows());
        case ScheduleKind::Constant: return MetricSchedule::constant(m1, m2);
        case ScheduleKind::ProxLinear: return MetricSchedule::prox_linear(a, r, t);
    }
    throw std::logic_error("make_schedule: unreachable");
}

}  // namespace padmm

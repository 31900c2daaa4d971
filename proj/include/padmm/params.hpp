#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padmm/linops.hpp"

namespace padmm {

enum class Variant { PADMM, PLADMM };

/// Which merit regularization a run tracks: Standard pairs (T0, C0/2);
/// Tightened doubles both coefficients to (2*T0, C0) and strengthens the
/// descent inequality by the squared multiplier step.
enum class MeritRegime { Standard, Tightened };

const char* to_string(Variant v);
const char* to_string(MeritRegime r);

// ---------------------------------------------------------------------------
// metric schedules
// ---------------------------------------------------------------------------

enum class ScheduleKind { Constant, ProxLinear, Zero };

const char* to_string(ScheduleKind k);

/// Supplier of the proximal metrics M1^k, M2^k. All supported kinds are
/// constant in k; mu1/mu2 are the exact spectral norms of the stored matrices.
class MetricSchedule {
 public:
    MetricSchedule() = default;

    static MetricSchedule zero(int n, int m);
    static MetricSchedule constant(MetricMatrix m1, MetricMatrix m2);
    /// M1 = (1/t) Id - r A*A, M2 = 0; requires t * r * ||A||^2 <= 1 (throws).
    static MetricSchedule prox_linear(const LinearMap& a, double r, double t);

    ScheduleKind kind() const { return kind_; }
    const MetricMatrix& m1(int k) const;
    const MetricMatrix& m2(int k) const;
    double mu1() const { return mu1_; }
    double mu2() const { return mu2_; }
    /// ProxLinear step size; throws for other kinds.
    double t() const;
    /// True when M2 = s*Id exactly; required by the solver's z-step.
    bool m2_is_scalar(double& s) const { return m2_.is_scalar_identity(s); }

 private:
    ScheduleKind kind_ = ScheduleKind::Zero;
    MetricMatrix m1_;
    MetricMatrix m2_;
    double mu1_ = 0.0;
    double mu2_ = 0.0;
    double t_ = 0.0;
};

// ---------------------------------------------------------------------------
// the named constants
// ---------------------------------------------------------------------------

/// Every named constant of the analysis, evaluated once from its defining
/// formula; derived fields are computed from the stored ones so the composite
/// identities hold bit-for-bit.
struct ConstantsBundle {
    Variant variant = Variant::PADMM;
    double rho = 1.0;
    double r = 1.0;
    double gamma = 1.1;
    double L = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double lambda_min_aat = 0.0;
    double lambda_min_ata = 0.0;
    double norm_A = 0.0;

    double T0 = 0.0, T1 = 0.0, T2 = 0.0;
    double C0 = 0.0, C1 = 0.0, C2 = 0.0;
    double CM = 0.0, CM_prime = 0.0;
    double C3 = 0.0, C4 = 0.0;
    double C5 = 0.0, C6 = 0.0, C7 = 0.0;
    double C8 = 0.0, C9 = 0.0, C10 = 0.0;
    double C11 = 0.0, C12 = 0.0, C13 = 0.0;
    double C14 = 0.0, C15 = 0.0, C16 = 0.0;
    double C17 = 0.0;

    std::optional<double> loja_constant;  // C_L, when supplied
    std::optional<double> C19;            // needs C_L and C17 > 0
    std::optional<double> C20, C21, C22;  // need C17 > 0
    std::optional<double> C23;            // needs C_L and C0 > 0

    bool rate_constants_available() const { return C17 > 0.0; }
};

/// (T0, T1) from rho, r and lambda_min(AA*). Throws for rho outside (0,2)
/// or nonpositive lambda.
std::pair<double, double> relaxation_constants(double rho, double r, double lam_min_aat);

struct VariantConstants {
    double C0, C1, C2, CM, CM_prime;
};

VariantConstants variant_constants(double L, double mu1, double r, double T1, Variant v);

/// Completes the bundle: C3..C17 and, when C_L is supplied, C19/C23; C20-C22
/// when C17 > 0.
ConstantsBundle compute_constants(Variant v, double rho, double r, double gamma, double L,
                                  double mu1, double mu2, const LinearMap& a,
                                  std::optional<double> loja_constant = std::nullopt);

// ---------------------------------------------------------------------------
// admissibility
// ---------------------------------------------------------------------------

struct AdmissibilityCheck {
    std::string name;
    bool pass = false;
    double slack = 0.0;  // smallest eigenvalue minus threshold (or bound margin)
    int k = -1;          // sampled schedule index, -1 for k-independent checks
};

struct AdmissibilityReport {
    ConstantsBundle constants;
    std::vector<AdmissibilityCheck> checks;
    bool pass() const;
    /// Flat key-value block: constants then "check.<name> = pass|fail slack=<v>".
    std::string to_text() const;
};

/// Assumption: r >= (2+gamma) T1 L and M3^k = 2 M1^k + r A*A - C1 Id >= 3/2 C0 Id.
AdmissibilityReport check_assumption1(const MetricSchedule& sched, const LinearMap& a,
                                      double r, double rho, double L, double gamma,
                                      const std::vector<int>& sample_ks, Variant v);

/// Strengthened assumption: 2 M1^k + r A*A + (L - 2 C1) Id >= 5/2 C0 Id.
AdmissibilityReport check_assumption2(const MetricSchedule& sched, const LinearMap& a,
                                      double r, double rho, double L, double gamma,
                                      const std::vector<int>& sample_ks, Variant v);

// ---------------------------------------------------------------------------
// parameter suggestions
// ---------------------------------------------------------------------------

enum class RChoice { I, II, III };

struct SuggestRInputs {
    Variant variant = Variant::PADMM;
    double L = 1.0;
    double gamma = 1.1;
    double rho = 1.0;
    double lambda_min_aat = 1.0;
    double lambda_min_ata = 0.0;  // choice III only
    double mu1 = 0.0;             // metric sup-norm bound used to evaluate C_M
    double t = 0.0;               // choice II only
    bool strengthened = false;    // evaluate with C_M' instead of C_M
};

/// The printed lower bound for r under the given scenario. Throws when the
/// choice's precondition fails (I: mu1 <= L/2; III: lambda_min(A*A) = 0).
double suggest_r(RChoice choice, const SuggestRInputs& in);

/// Builds the schedule for the given kind. kind == Constant reads m1/m2;
/// ProxLinear reads t (validated against t r ||A||^2 <= 1).
MetricSchedule make_schedule(ScheduleKind kind, const LinearMap& a, double r, double t,
                             const MetricMatrix& m1, const MetricMatrix& m2);

}  // namespace padmm

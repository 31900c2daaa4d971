#include "padmm/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace padmm {

static constexpr double kInf = std::numeric_limits<double>::infinity();

std::string violations_to_text(const std::vector<Violation>& v) {
    std::ostringstream os;
    char buf[40];
    for (const auto& x : v) {
        os << "check=" << x.check << " k=" << x.k;
        std::snprintf(buf, sizeof(buf), "%.17g", x.lhs);
        os << " lhs=" << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", x.rhs);
        os << " rhs=" << buf << "\n";
    }
    return os.str();
}

double augmented_lagrangian(const Vec& x, const Vec& z, const Vec& y, const ProblemSpec& p,
                            double r) {
    const double gz = p.g.eval(z);
    if (std::isinf(gz)) return kInf;
    const Vec res = sub(p.A.apply(x), z);
    return gz + p.h.eval(x) + dot(y, res) + 0.5 * r * dot(res, res);
}

double merit_F(const Vec& x, const Vec& z, const Vec& y, const Vec& x_prev, const Vec& y_prev,
               const ProblemSpec& p, const ConstantsBundle& c, MeritRegime regime) {
    const double lr = augmented_lagrangian(x, z, y, p, c.r);
    const double t_coef = regime == MeritRegime::Standard ? c.T0 : 2.0 * c.T0;
    const double x_coef = regime == MeritRegime::Standard ? 0.5 * c.C0 : c.C0;
    const Vec ady = p.A.apply_adjoint(sub(y, y_prev));
    const Vec dx = sub(x, x_prev);
    return lr + t_coef * dot(ady, ady) + x_coef * dot(dx, dx);
}

// ---------------------------------------------------------------------------
// descent and iterate estimates
// ---------------------------------------------------------------------------

std::vector<Violation> descent_check(const Trace& t, const MetricSchedule& sched,
                                     const ConstantsBundle& c, MeritRegime regime) {
    std::vector<Violation> out;
    if (t.records.size() < 3) {
        throw std::invalid_argument("descent_check: trace length >= 3 required");
    }
    for (size_t j = 2; j < t.records.size(); ++j) {
        // records j-1 and j hold F_k and F_{k+1} for k = j-1 >= 1
        const TraceRecord& prev = t.records[j - 1];
        const TraceRecord& cur = t.records[j];
        if (std::isinf(prev.fk) || std::isinf(cur.fk)) continue;
        const Vec dzv = sub(cur.z, prev.z);
        double lhs = cur.fk + 0.25 * c.C0 * cur.dx * cur.dx +
                     0.5 * metric_norm_sq(sched.m2(cur.k - 1), dzv);
        if (regime == MeritRegime::Tightened) {
            lhs += cur.dy * cur.dy / (c.rho * c.r);
        }
        const double rhs = prev.fk;
        if (lhs > rhs + 1e-9 * (1.0 + std::fabs(rhs))) {
            out.push_back({"descent", cur.k, lhs, rhs});
        }
    }
    return out;
}

std::vector<Violation> iterate_estimates_check(const Trace& t, const ProblemSpec& p,
                                     const ConstantsBundle& c) {
    std::vector<Violation> out;
    if (t.records.size() < 3) {
        throw std::invalid_argument("iterate_estimates_check: trace length >= 3 required");
    }
    const double rr = c.rho * c.r;
    auto astar_dy = [&](size_t j) {
        return norm(p.A.apply_adjoint(sub(t.records[j].y, t.records[j - 1].y)));
    };
    for (size_t j = 1; j < t.records.size(); ++j) {
        const TraceRecord& cur = t.records[j];
        const TraceRecord& prev = t.records[j - 1];
        const double ady1 = astar_dy(j);

        // (ii) multiplier bound, valid from the first transition on
        {
            const double lhs = dot(cur.y, cur.y) / (2.0 * c.r);
            const double rhs = 0.5 * c.T0 * ady1 * ady1 +
                               c.T1 / c.r * dot(p.h.grad(cur.x), p.h.grad(cur.x)) +
                               0.25 * c.C0 * cur.dx * cur.dx;
            if (lhs > rhs + 1e-9 * (1.0 + rhs)) {
                out.push_back({"estimate_mult", cur.k, lhs, rhs});
            }
        }
        if (j < 2) continue;
        const double ady0 = astar_dy(j - 1);
        // (i) z movement bounded by x movement
        {
            const double lhs = cur.dz;
            const double rhs = c.norm_A * cur.dx + (cur.dy + prev.dy) / rr;
            if (lhs > rhs + 1e-9 * (1.0 + rhs)) {
                out.push_back({"estimate_z_by_x", cur.k, lhs, rhs});
            }
        }
        // (iii) y movement bounded by x movement
        {
            const double lhs = cur.dy;
            const double rhs = c.C3 * cur.dx + c.C4 * prev.dx + c.T2 * (ady0 - ady1);
            if (lhs > rhs + 1e-9 * (1.0 + std::fabs(rhs))) {
                out.push_back({"estimate_y_by_x", cur.k, lhs, rhs});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// subgradient residuals
// ---------------------------------------------------------------------------

Subgradient subgradient_d(const Vec& x0, const Vec& z0, const Vec& y0, const Vec& x1,
                          const Vec& z1, const Vec& y1, const ProblemSpec& p,
                          const ConstantsBundle& c, const MetricMatrix& m1,
                          const MetricMatrix& m2) {
    Subgradient s;
    const Vec dy = sub(y1, y0);
    const Vec xd = sub(x0, x1);
    s.d_x = add(p.A.apply_adjoint(dy), m1.apply(xd));
    if (c.C2 != 0.0) {
        const Vec gd = sub(p.h.grad(x1), p.h.grad(x0));
        s.d_x = axpy(s.d_x, c.C2, gd);
    }
    s.d_z = add(scale(-1.0, dy), scale(c.r, p.A.apply(xd)));
    if (!m2.is_zero()) s.d_z = add(s.d_z, m2.apply(sub(z0, z1)));
    s.d_y = scale(1.0 / (c.rho * c.r), dy);
    s.norm = std::sqrt(dot(s.d_x, s.d_x) + dot(s.d_z, s.d_z) + dot(s.d_y, s.d_y));
    return s;
}

SubgradientD subgradient_D_from(const Subgradient& d, const Vec& x0, const Vec& y0,
                                const Vec& x1, const Vec& y1, const ProblemSpec& p,
                                const ConstantsBundle& c, MeritRegime regime) {
    const double t_coef = regime == MeritRegime::Standard ? 2.0 * c.T0 : 4.0 * c.T0;
    SubgradientD s;
    const Vec dxv = sub(x1, x0);
    const Vec dy = sub(y1, y0);
    const Vec aady = p.A.apply(p.A.apply_adjoint(dy));
    s.D_x = axpy(d.d_x, c.C0, dxv);
    s.D_z = d.d_z;
    s.D_y = axpy(d.d_y, t_coef, aady);
    s.D_xp = scale(-c.C0, dxv);
    s.D_yp = scale(-t_coef, aady);
    s.norm = std::sqrt(dot(s.D_x, s.D_x) + dot(s.D_z, s.D_z) + dot(s.D_y, s.D_y) +
                       dot(s.D_xp, s.D_xp) + dot(s.D_yp, s.D_yp));
    return s;
}

SubgradientD subgradient_D(const Vec& x0, const Vec& z0, const Vec& y0, const Vec& x1,
                           const Vec& z1, const Vec& y1, const ProblemSpec& p,
                           const ConstantsBundle& c, const MetricMatrix& m1,
                           const MetricMatrix& m2, MeritRegime regime) {
    const Subgradient d = subgradient_d(x0, z0, y0, x1, z1, y1, p, c, m1, m2);
    return subgradient_D_from(d, x0, y0, x1, y1, p, c, regime);
}

std::vector<Violation> bound_check_d(const Trace& t, const ProblemSpec& p,
                                     const MetricSchedule& sched, const ConstantsBundle& c) {
    std::vector<Violation> out;
    for (size_t j = 1; j < t.records.size(); ++j) {
        const TraceRecord& a = t.records[j - 1];
        const TraceRecord& b = t.records[j];
        const Subgradient d = subgradient_d(a.x, a.z, a.y, b.x, b.z, b.y, p, c,
                                            sched.m1(b.k - 1), sched.m2(b.k - 1));
        const double rhs = c.C5 * b.dx + c.C6 * b.dz + c.C7 * b.dy;
        if (d.norm > rhs + 1e-9 * (1.0 + rhs)) {
            out.push_back({"bound_d", b.k, d.norm, rhs});
        }
    }
    return out;
}

std::vector<Violation> bound_check_D(const Trace& t, const ProblemSpec& p,
                                     const MetricSchedule& sched, const ConstantsBundle& c,
                                     MeritRegime regime) {
    std::vector<Violation> out;
    auto astar_dy = [&](size_t j) {
        return norm(p.A.apply_adjoint(sub(t.records[j].y, t.records[j - 1].y)));
    };
    for (size_t j = 1; j < t.records.size(); ++j) {
        const TraceRecord& a = t.records[j - 1];
        const TraceRecord& b = t.records[j];
        const SubgradientD D = subgradient_D(a.x, a.z, a.y, b.x, b.z, b.y, p, c,
                                             sched.m1(b.k - 1), sched.m2(b.k - 1), regime);
        if (regime == MeritRegime::Standard) {
            const double rhs = c.C8 * b.dx + c.C9 * b.dz + c.C10 * b.dy;
            if (D.norm > rhs + 1e-9 * (1.0 + rhs)) {
                out.push_back({"bound_D_onestep", b.k, D.norm, rhs});
            }
            if (j >= 3) {
                const TraceRecord& a2 = t.records[j - 2];
                const double rhs3 = c.C11 * (b.dx + a.dx + a2.dx) +
                                    c.C12 * (astar_dy(j - 1) - astar_dy(j)) +
                                    c.C13 * (astar_dy(j - 2) - astar_dy(j - 1));
                if (D.norm > rhs3 + 1e-9 * (1.0 + std::fabs(rhs3))) {
                    out.push_back({"bound_D_threestep", b.k, D.norm, rhs3});
                }
            }
        } else if (j >= 3) {
            // Tightened merit carries 2*T0, so the Delta-y budget gains the
            // extra 4*T0*||A||^2 on top of the stored C15
            const double c15 = c.C15 + 4.0 * c.T0 * c.norm_A * c.norm_A;
            const double rhs = c.C14 * b.dx + c15 * b.dy + c.C16 * a.dy;
            if (D.norm > rhs + 1e-9 * (1.0 + rhs)) {
                out.push_back({"bound_D_tight", b.k, D.norm, rhs});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// KKT, boundedness, summability
// ---------------------------------------------------------------------------

KktResidual kkt_residual(const Vec& x, const Vec& z, const Vec& y, const ProblemSpec& p,
                         double tol) {
    KktResidual res;
    res.stationarity = norm(add(p.A.apply_adjoint(y), p.h.grad(x)));
    res.membership = p.g.subdiff_member(z, y, tol);
    res.feasibility = norm(sub(p.A.apply(x), z));
    return res;
}

const char* to_string(BoundednessScenario s) {
    switch (s) {
        case BoundednessScenario::BI: return "B-I";
        case BoundednessScenario::BII: return "B-II";
        default: return "none";
    }
}

BoundednessScenario boundedness_precheck(const ProblemSpec& p) {
    const bool square = p.A.rows() == p.A.cols();
    if (square && p.A.lambda_min_AtA() > 1e-10 && p.g.coercive && p.h.bounded_below) {
        return BoundednessScenario::BI;
    }
    if (p.h.coercive && p.g.bounded_below && p.h.bounded_below) {
        return BoundednessScenario::BII;
    }
    return BoundednessScenario::None;
}

SummabilityResult summability_bound(const std::vector<Vec>& a, const Vec& c0, const Vec& c1,
                                    const Vec& c2, double delta_bar, int k_lo, int k_hi,
                                    int i) {
    const size_t n = c0.size();
    if (c1.size() != n || c2.size() != n) {
        throw std::invalid_argument("summability_bound: coefficient dims");
    }
    for (size_t j = 0; j < n; ++j) {
        if (c0[j] + c1[j] + c2[j] >= 1.0) {
            throw std::invalid_argument("summability_bound: c0 + c1 + c2 < 1 required");
        }
    }
    if (k_lo < 0 || k_hi < k_lo || k_lo + 2 >= static_cast<int>(a.size()) ||
        k_hi >= static_cast<int>(a.size()) || i < 0 || i >= static_cast<int>(n)) {
        throw std::invalid_argument("summability_bound: window out of range");
    }
    double num = delta_bar;
    for (size_t j = 0; j < n; ++j) {
        num += (1.0 - c0[j] - c1[j]) * a[k_lo][j] + (1.0 - c0[j]) * a[k_lo + 1][j] +
               a[k_lo + 2][j];
    }
    SummabilityResult res;
    res.bound = num / (1.0 - c0[i] - c1[i] - c2[i]);
    res.actual = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) res.actual += a[k][i];
    res.ok = res.actual <= res.bound + 1e-12;
    return res;
}

}  // namespace padmm

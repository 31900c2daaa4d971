#include "padmm/solver.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "padmm/diagnostics.hpp"

namespace padmm {

const char* to_string(XSolver x) {
    switch (x) {
        case XSolver::ProxForm: return "prox_form";
        case XSolver::QuadraticClosedForm: return "closed_form";
        default: return "cg";
    }
}

// ---------------------------------------------------------------------------
// x-subproblem solver with cached factorization
// ---------------------------------------------------------------------------

namespace {

class XStepSolver {
 public:
    XStepSolver(const ProblemSpec& p, const SolverConfig& c) : p_(p), c_(c) {
        const MetricMatrix& m1 = c.schedule.m1(0);
        if (c.x_solver == XSolver::ProxForm) {
            if (c.schedule.kind() != ScheduleKind::ProxLinear) {
                throw std::invalid_argument(
                    "x-step: ProxForm requires a prox-linear schedule");
            }
            if (c.variant == Variant::PADMM && !p.h.prox) {
                throw std::invalid_argument("x-step: ProxForm requires a prox-capable h");
            }
            return;
        }
        if (c.x_solver == XSolver::LinearSystemCG && c.variant == Variant::PADMM) {
            throw std::invalid_argument("x-step: LinearSystemCG is PL-ADMM only");
        }
        if (c.x_solver == XSolver::QuadraticClosedForm && c.variant == Variant::PADMM &&
            !p.h.quadratic) {
            throw std::invalid_argument(
                "x-step: QuadraticClosedForm requires a quadratic h "
                "(use a prox-linear schedule with ProxForm otherwise)");
        }
        // system matrix: r A*A + M1 (+ Hessian for the P-ADMM closed form)
        Matrix sys = mat_add(mat_scale(c.r, p.A.matrix().gram()), m1.matrix());
        if (c.variant == Variant::PADMM) sys = mat_add(sys, p.h.quadratic->hessian);
        system_ = sys;
        if (c.x_solver == XSolver::QuadraticClosedForm) {
            chol_.emplace(std::move(sys));
        }
    }

    Vec solve(const IterateState& s, const Vec& z_new) const {
        if (c_.x_solver == XSolver::ProxForm) {
            const double t = c_.schedule.t();
            const Vec inner = axpy(s.y, c_.r, sub(p_.A.apply(s.x), z_new));
            const Vec pulled = p_.A.apply_adjoint(inner);
            if (c_.variant == Variant::PADMM) {
                return p_.h.prox(axpy(s.x, -t, pulled), t);
            }
            return axpy(s.x, -t, add(p_.h.grad(s.x), pulled));
        }
        // rhs: M1 x^k - A*y^k + r A*z_new, minus q (P-ADMM) or grad h(x^k) (PL-ADMM)
        Vec rhs = sub(scale(c_.r, p_.A.apply_adjoint(z_new)), p_.A.apply_adjoint(s.y));
        const MetricMatrix& m1 = c_.schedule.m1(s.k);
        if (!m1.is_zero()) rhs = add(rhs, m1.apply(s.x));
        if (c_.variant == Variant::PADMM) {
            rhs = sub(rhs, p_.h.quadratic->linear);
        } else {
            rhs = sub(rhs, p_.h.grad(s.x));
        }
        if (c_.x_solver == XSolver::QuadraticClosedForm) return chol_->solve(rhs);
        const CgResult cg = cg_solve(system_, rhs, 1e-12);
        if (!cg.converged) {
            throw std::runtime_error("x-step: CG failed to reach tolerance (residual " +
                                     std::to_string(cg.residual) + ")");
        }
        return cg.x;
    }

 private:
    const ProblemSpec& p_;
    const SolverConfig& c_;
    Matrix system_;
    std::optional<CholeskyFactor> chol_;
};

}  // namespace

// ---------------------------------------------------------------------------
// updates
// ---------------------------------------------------------------------------

Vec z_step(const IterateState& s, const ProblemSpec& p, const SolverConfig& c) {
    double m2 = 0.0;
    if (!c.schedule.m2_is_scalar(m2) || m2 < 0.0) {
        throw std::invalid_argument("z_step: M2 must be a nonnegative scalar multiple of Id");
    }
    const Vec ax = p.A.apply(s.x);
    Vec center(ax.size());
    const double denom = c.r + m2;
    for (size_t i = 0; i < ax.size(); ++i) {
        center[i] = (c.r * ax[i] + s.y[i] + m2 * s.z[i]) / denom;
    }
    return p.g.prox(center, 1.0 / denom);
}

Vec x_step_padmm(const IterateState& s, const Vec& z_new, const ProblemSpec& p,
                 const SolverConfig& c) {
    if (c.variant != Variant::PADMM) {
        throw std::invalid_argument("x_step_padmm: config variant is not P-ADMM");
    }
    return XStepSolver(p, c).solve(s, z_new);
}

Vec x_step_pladmm(const IterateState& s, const Vec& z_new, const ProblemSpec& p,
                  const SolverConfig& c) {
    if (c.variant != Variant::PLADMM) {
        throw std::invalid_argument("x_step_pladmm: config variant is not PL-ADMM");
    }
    return XStepSolver(p, c).solve(s, z_new);
}

Vec y_step(const IterateState& s, const Vec& x_new, const Vec& z_new, const ProblemSpec& p,
           const SolverConfig& c) {
    return axpy(s.y, c.rho * c.r, sub(p.A.apply(x_new), z_new));
}

IterateState step(const IterateState& s, const ProblemSpec& p, const SolverConfig& c) {
    const Vec z_new = z_step(s, p, c);
    const Vec x_new = c.variant == Variant::PADMM ? x_step_padmm(s, z_new, p, c)
                                                  : x_step_pladmm(s, z_new, p, c);
    const Vec y_new = y_step(s, x_new, z_new, p, c);
    return IterateState{s.k + 1, x_new, z_new, y_new, s.x, s.y};
}

double x_stationarity_residual(const IterateState& s, const Vec& x_new, const Vec& z_new,
                               const ProblemSpec& p, const SolverConfig& c) {
    const Vec grad = c.variant == Variant::PADMM ? p.h.grad(x_new) : p.h.grad(s.x);
    Vec res = add(grad, p.A.apply_adjoint(axpy(s.y, c.r, sub(p.A.apply(x_new), z_new))));
    const MetricMatrix& m1 = c.schedule.m1(s.k);
    if (!m1.is_zero()) res = add(res, m1.apply(sub(x_new, s.x)));
    return norm(res);
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

static std::string synthesize_config_echo(const SolverConfig& c) {
    std::ostringstream os;
    char buf[40];
    auto kv = [&](const char* k, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << k << "=" << buf << "\n";
    };
    os << "variant=" << to_string(c.variant) << "\n";
    kv("r", c.r);
    kv("rho", c.rho);
    kv("gamma", c.gamma);
    os << "schedule=" << to_string(c.schedule.kind()) << "\n";
    os << "x_solver=" << to_string(c.x_solver) << "\n";
    os << "regime=" << to_string(c.regime) << "\n";
    os << "max_iter=" << c.stopping.max_iter << "\n";
    kv("diff_tol", c.stopping.diff_tol);
    kv("kkt_tol", c.stopping.kkt_tol);
    os << "seed=" << c.seed << "\n";
    return os.str();
}

Trace run(const ProblemSpec& p, const SolverConfig& c) {
    Trace trace;
    trace.regime = c.regime;
    trace.config_echo = synthesize_config_echo(c);
    trace.constants = compute_constants(c.variant, c.rho, c.r, c.gamma, p.h.lipschitz,
                                        c.schedule.mu1(), c.schedule.mu2(), p.A);

    const AdmissibilityReport cert =
        c.regime == MeritRegime::Standard
            ? check_assumption1(c.schedule, p.A, c.r, c.rho, p.h.lipschitz, c.gamma, {0},
                                c.variant)
            : check_assumption2(c.schedule, p.A, c.r, c.rho, p.h.lipschitz, c.gamma, {0},
                                c.variant);
    trace.certified = cert.pass();
    if (!trace.certified && !c.force_uncertified) {
        throw std::invalid_argument(
            "run: configuration fails the admissibility assumption (set "
            "force_uncertified to run anyway)");
    }

    const XStepSolver xs(p, c);

    IterateState s;
    s.k = 0;
    s.x = c.x0.empty() ? zeros(p.n()) : c.x0;
    s.z = c.z0.empty() ? zeros(p.m()) : c.z0;
    s.y = c.y0.empty() ? zeros(p.m()) : c.y0;
    if (static_cast<int>(s.x.size()) != p.n() || static_cast<int>(s.z.size()) != p.m() ||
        static_cast<int>(s.y.size()) != p.m()) {
        throw std::invalid_argument("run: starting vector dimension mismatch");
    }
    s.x_prev = s.x;
    s.y_prev = s.y;

    TraceRecord r0;
    r0.k = 0;
    r0.x = s.x;
    r0.z = s.z;
    r0.y = s.y;
    r0.lr = augmented_lagrangian(s.x, s.z, s.y, p, c.r);
    r0.fk = r0.lr;
    r0.feas = norm(sub(p.A.apply(s.x), s.z));
    trace.records.push_back(std::move(r0));

    trace.status = "max_iter";
    for (int k = 0; k < c.stopping.max_iter; ++k) {
        Vec z_new, x_new, y_new;
        try {
            z_new = z_step(s, p, c);
            x_new = xs.solve(s, z_new);
            y_new = axpy(s.y, c.rho * c.r, sub(p.A.apply(x_new), z_new));
        } catch (const std::runtime_error& e) {
            trace.status = std::string("error: ") + e.what();
            return trace;
        }

        TraceRecord rec;
        rec.k = k + 1;
        rec.x = x_new;
        rec.z = z_new;
        rec.y = y_new;
        rec.dx = norm(sub(x_new, s.x));
        rec.dz = norm(sub(z_new, s.z));
        rec.dy = norm(sub(y_new, s.y));
        rec.lr = augmented_lagrangian(x_new, z_new, y_new, p, c.r);
        rec.fk = merit_F(x_new, z_new, y_new, s.x, s.y, p, trace.constants, c.regime);
        rec.feas = norm(sub(p.A.apply(x_new), z_new));
        rec.stat_res = x_stationarity_residual(s, x_new, z_new, p, c);
        const Subgradient d = subgradient_d(s.x, s.z, s.y, x_new, z_new, y_new, p,
                                            trace.constants, c.schedule.m1(k),
                                            c.schedule.m2(k));
        rec.d_norm = d.norm;
        rec.D_norm =
            subgradient_D_from(d, s.x, s.y, x_new, y_new, p, trace.constants, c.regime)
                .norm;
        const double diff_sum = rec.dx + rec.dz + rec.dy;
        trace.records.push_back(std::move(rec));

        s.x_prev = s.x;
        s.y_prev = s.y;
        s.x = std::move(x_new);
        s.z = std::move(z_new);
        s.y = std::move(y_new);
        s.k = k + 1;

        if (c.stopping.diff_tol > 0.0 && diff_sum <= c.stopping.diff_tol) {
            trace.status = "diff_tol";
            break;
        }
        if (c.stopping.kkt_tol > 0.0 && d.norm <= c.stopping.kkt_tol) {
            trace.status = "kkt_tol";
            break;
        }
    }
    return trace;
}

}  // namespace padmm

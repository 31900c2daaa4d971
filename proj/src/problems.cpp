#include "padmm/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "padmm/diagnostics.hpp"
#include "padmm/rng.hpp"
#include "padmm/solver.hpp"

namespace padmm {

const char* to_string(OracleKind k) {
    switch (k) {
        case OracleKind::ClosedForm: return "closed_form";
        case OracleKind::SupportEnumeration: return "support_enumeration";
        case OracleKind::GridSearch: return "grid_search";
        case OracleKind::Reference: return "reference";
        default: return "none";
    }
}

// ---------------------------------------------------------------------------
// random full-rank draws
// ---------------------------------------------------------------------------

static Matrix random_matrix(int rows, int cols, Lcg64& rng) {
    Matrix m(rows, cols);
    for (double& v : m.a) v = rng.next_normal();
    return m;
}

/// Row orthonormalization (modified Gram-Schmidt, two passes). Returns false
/// on a rank-deficient draw.
static bool orthonormalize_rows(Matrix& g) {
    for (int i = 0; i < g.rows; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < i; ++j) {
                double proj = 0.0;
                for (int k = 0; k < g.cols; ++k) proj += g(i, k) * g(j, k);
                for (int k = 0; k < g.cols; ++k) g(i, k) -= proj * g(j, k);
            }
        }
        double nrm = 0.0;
        for (int k = 0; k < g.cols; ++k) nrm += g(i, k) * g(i, k);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) return false;
        for (int k = 0; k < g.cols; ++k) g(i, k) /= nrm;
    }
    return true;
}

/// Random full-row-rank A with orthonormal rows, so lambda_min(AA*) = 1 and
/// ||A|| = 1. Keeps the analysis constants desk-scale. Reseeds up to 10 times.
static Matrix random_full_row_rank(int rows, int cols, Lcg64& rng) {
    for (int attempt = 0; attempt < 10; ++attempt) {
        Matrix m = random_matrix(rows, cols, rng);
        if (orthonormalize_rows(m)) return m;
    }
    throw std::runtime_error("random_full_row_rank: degenerate draws, giving up");
}

/// Random full-rank B = Q diag(s) P with orthonormal factors and singular
/// values in [1, sqrt(2)], so lambda_max(B'B) = 2 (the declared Lipschitz
/// constant) and the condition number stays desk-scale. Reseeds up to 10 times.
static Matrix random_full_rank_square(int n, Lcg64& rng) {
    for (int attempt = 0; attempt < 10; ++attempt) {
        Matrix q = random_matrix(n, n, rng);
        Matrix p = random_matrix(n, n, rng);
        if (!orthonormalize_rows(q) || !orthonormalize_rows(p)) continue;
        std::vector<double> sv(n);
        double top = 0.0;
        for (double& s : sv) {
            s = rng.next_uniform(1.0, std::sqrt(2.0));
            top = std::max(top, s);
        }
        const double rescale = std::sqrt(2.0) / top;
        Matrix d(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = sv[i] * rescale;
        return matmul(q, matmul(d, p));
    }
    throw std::runtime_error("random_full_rank_square: degenerate draws, giving up");
}

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

TestProblem quadratic_quadratic(int n, int m, std::uint64_t seed) {
    if (m > n) throw std::invalid_argument("quadratic_quadratic: m <= n required");
    Lcg64 rng(seed);
    const Matrix b_mat = random_full_rank_square(n, rng);
    Vec b(n);
    for (double& v : b) v = rng.next_normal();
    const Matrix a_mat = random_full_row_rank(m, n, rng);
    Vec c(m);
    for (double& v : c) v = rng.next_normal();
    const double lam_g = 1.0;

    TestProblem tp;
    tp.seed = seed;
    tp.spec.h = make_least_squares(b_mat, b);
    tp.spec.g = make_quadratic_penalty(m, lam_g, c);
    tp.spec.A = LinearMap(a_mat);

    // KKT system: (B'B + lam_g A'A) x = B'b + lam_g A'c
    Matrix sys = mat_add(b_mat.gram(), mat_scale(lam_g, a_mat.gram()));
    Vec rhs = add(b_mat.apply_adjoint(b), scale(lam_g, a_mat.apply_adjoint(c)));
    Oracle o;
    o.kind = OracleKind::ClosedForm;
    o.x = cholesky_solve(std::move(sys), std::move(rhs));
    o.z = a_mat.apply(o.x);
    o.y = scale(lam_g, sub(o.z, c));
    o.objective = tp.spec.h.eval(o.x) + tp.spec.g.eval(o.z);
    tp.oracle = std::move(o);

    std::ostringstream d;
    d << "quadratic_quadratic n=" << n << " m=" << m << " seed=" << seed;
    tp.descriptor = d.str();
    return tp;
}

/// 1D/2D grid argmin of 1/2||Bx-b||^2 + lambda ||Ax||_1, three refinement passes.
static Vec lasso_grid_search(const ProblemSpec& spec, double lambda) {
    const int n = spec.n();
    double lo = -10.0, hi = 10.0, step = 1e-3;
    Vec best(n, 0.0);
    const auto objective = [&](const Vec& x) {
        const Vec ax = spec.A.apply(x);
        double l1 = 0.0;
        for (double v : ax) l1 += std::fabs(v);
        return spec.h.eval(x) + lambda * l1;
    };
    for (int pass = 0; pass < 3; ++pass) {
        double best_val = std::numeric_limits<double>::infinity();
        Vec x(n);
        const int np = static_cast<int>(std::floor((hi - lo) / step)) + 1;
        for (int i = 0; i < np; ++i) {
            x[0] = lo + i * step;
            if (n == 1) {
                const double v = objective(x);
                if (v < best_val) {
                    best_val = v;
                    best = x;
                }
            } else {
                for (int j = 0; j < np; ++j) {
                    x[1] = lo + j * step;
                    const double v = objective(x);
                    if (v < best_val) {
                        best_val = v;
                        best = x;
                    }
                }
            }
        }
        lo = best[0] - 2.0 * step;
        hi = best[0] + 2.0 * step;
        step *= 0.01;
    }
    return best;
}

TestProblem lasso_problem(int n, int m, int sparsity, double lambda, std::uint64_t seed) {
    if (lambda <= 0.0) throw std::invalid_argument("lasso_problem: lambda > 0");
    if (m > n) throw std::invalid_argument("lasso_problem: m <= n required");
    Lcg64 rng(seed);
    const Matrix b_mat = random_full_rank_square(n, rng);
    // planted sparse signal
    Vec x_star(n, 0.0);
    for (int s = 0; s < std::min(sparsity, n); ++s) {
        const int idx = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
        x_star[idx] = rng.next_uniform(0.5, 2.0) * (rng.next_uniform() < 0.5 ? -1.0 : 1.0);
    }
    const Vec b = b_mat.apply(x_star);
    const Matrix a_mat = random_full_row_rank(m, n, rng);

    TestProblem tp;
    tp.seed = seed;
    tp.spec.h = make_least_squares(b_mat, b);
    tp.spec.g = make_l1(m, lambda);
    tp.spec.A = LinearMap(a_mat);

    if (n <= 2) {
        Oracle o;
        o.kind = OracleKind::GridSearch;
        o.x = lasso_grid_search(tp.spec, lambda);
        o.z = tp.spec.A.apply(o.x);
        // multiplier from stationarity: A*y = -grad h(x); minimum-norm solution
        const Vec g = tp.spec.h.grad(o.x);
        o.y = cholesky_solve(a_mat.gram_outer(), a_mat.apply(scale(-1.0, g)));
        o.objective = tp.spec.h.eval(o.x) + tp.spec.g.eval(o.z);
        tp.oracle = std::move(o);
    } else {
        // high-precision reference run; labeled reference, not ground truth
        SuggestRInputs si;
        si.variant = Variant::PADMM;
        si.L = tp.spec.h.lipschitz;
        si.rho = 1.0;
        si.lambda_min_aat = tp.spec.A.lambda_min_AAt();
        si.mu1 = tp.spec.h.lipschitz;
        SolverConfig sc;
        sc.variant = Variant::PADMM;
        sc.rho = 1.0;
        sc.r = suggest_r(RChoice::I, si);
        sc.schedule = MetricSchedule::constant(
            MetricMatrix::scaled_identity(n, si.mu1), MetricMatrix::zero(m));
        sc.x_solver = XSolver::QuadraticClosedForm;
        sc.stopping = {100000, 1e-13, 0.0};
        const Trace t = run(tp.spec, sc);
        Oracle o;
        o.kind = OracleKind::Reference;
        o.x = t.records.back().x;
        o.z = t.records.back().z;
        o.y = t.records.back().y;
        o.objective = tp.spec.h.eval(o.x) + tp.spec.g.eval(o.z);
        tp.oracle = std::move(o);
    }

    std::ostringstream d;
    d << "lasso n=" << n << " m=" << m << " sparsity=" << sparsity << " lambda=" << lambda
      << " seed=" << seed;
    tp.descriptor = d.str();
    return tp;
}

TestProblem l0_least_squares(int n, int m, double lambda, std::uint64_t seed) {
    if (m != n) throw std::invalid_argument("l0_least_squares: A = Id requires m = n");
    if (n > 10) {
        throw std::invalid_argument("l0_least_squares: support enumeration limited to n <= 10");
    }
    if (lambda < 0.0) throw std::invalid_argument("l0_least_squares: lambda >= 0");
    Lcg64 rng(seed);
    const Matrix b_mat = random_full_rank_square(n, rng);
    Vec x_star(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (rng.next_uniform() < 0.6) x_star[i] = rng.next_uniform(-2.0, 2.0);
    }
    const Vec b = b_mat.apply(x_star);

    TestProblem tp;
    tp.seed = seed;
    tp.spec.h = make_least_squares(b_mat, b);
    tp.spec.g = make_l0(n, std::max(lambda, 1e-12));
    tp.spec.A = LinearMap(Matrix::identity(n));

    // enumerate every support, solve the restricted normal equations
    const Matrix gram = b_mat.gram();
    const Vec btb = b_mat.apply_adjoint(b);
    Oracle best;
    best.kind = OracleKind::SupportEnumeration;
    best.objective = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> sup;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) sup.push_back(i);
        }
        Vec x(n, 0.0);
        if (!sup.empty()) {
            const int s = static_cast<int>(sup.size());
            Matrix gs(s, s);
            Vec rs(s);
            for (int i = 0; i < s; ++i) {
                rs[i] = btb[sup[i]];
                for (int j = 0; j < s; ++j) gs(i, j) = gram(sup[i], sup[j]);
            }
            const Vec xs = cholesky_solve(std::move(gs), std::move(rs));
            for (int i = 0; i < s; ++i) x[sup[i]] = xs[i];
        }
        const double cost = tp.spec.h.eval(x) + tp.spec.g.eval(x);
        if (cost < best.objective) {
            best.objective = cost;
            best.x = x;
        }
    }
    best.z = best.x;
    best.y = scale(-1.0, tp.spec.h.grad(best.x));
    tp.oracle = std::move(best);

    std::ostringstream d;
    d << "l0_least_squares n=" << n << " lambda=" << lambda << " seed=" << seed;
    tp.descriptor = d.str();
    return tp;
}

KktCheckResult kkt_check(const TestProblem& p, const Vec& x, const Vec& z, const Vec& y,
                         double tol) {
    const KktResidual r = kkt_residual(x, z, y, p.spec, tol);
    KktCheckResult res;
    res.stationarity = r.stationarity;
    res.feasibility = r.feasibility;
    res.membership = r.membership;
    res.ok = r.stationarity <= tol && r.feasibility <= tol && r.membership;
    return res;
}

}  // namespace padmm

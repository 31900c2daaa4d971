#include "padmm/functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "padmm/rng.hpp"

namespace padmm {

static constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// proximal maps
// ---------------------------------------------------------------------------

Vec prox_l1(const Vec& v, double gamma, double lambda) {
    if (gamma <= 0.0 || lambda <= 0.0) throw std::invalid_argument("prox_l1: gamma, lambda > 0");
    const double thr = gamma * lambda;
    Vec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        const double m = std::fabs(v[i]) - thr;
        w[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
    }
    return w;
}

Vec prox_l0(const Vec& v, double gamma, double lambda) {
    if (gamma <= 0.0 || lambda <= 0.0) throw std::invalid_argument("prox_l0: gamma, lambda > 0");
    const double thr = std::sqrt(2.0 * gamma * lambda);
    Vec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        // tie |v| == thr picks 0
        w[i] = std::fabs(v[i]) > thr ? v[i] : 0.0;
    }
    return w;
}

Vec prox_box(const Vec& v, const Vec& lower, const Vec& upper) {
    if (lower.size() != v.size() || upper.size() != v.size()) {
        throw std::invalid_argument("prox_box: dimension mismatch");
    }
    Vec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (lower[i] > upper[i]) throw std::invalid_argument("prox_box: lower > upper");
        w[i] = std::min(std::max(v[i], lower[i]), upper[i]);
    }
    return w;
}

Vec prox_quadratic(const Vec& v, double gamma, const Vec& c, double lambda) {
    if (gamma <= 0.0 || lambda <= 0.0) {
        throw std::invalid_argument("prox_quadratic: gamma, lambda > 0");
    }
    if (c.size() != v.size()) throw std::invalid_argument("prox_quadratic: dimension mismatch");
    const double gl = gamma * lambda;
    Vec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = (v[i] + gl * c[i]) / (1.0 + gl);
    return w;
}

// ---------------------------------------------------------------------------
// subdifferential membership
// ---------------------------------------------------------------------------

bool subdiff_member_l1(const Vec& z, const Vec& y, double lambda, double tol) {
    if (z.size() != y.size()) throw std::invalid_argument("subdiff_member_l1: dims");
    for (size_t i = 0; i < z.size(); ++i) {
        if (std::fabs(z[i]) <= tol) {
            if (std::fabs(y[i]) > lambda + tol) return false;
        } else {
            const double s = z[i] > 0.0 ? 1.0 : -1.0;
            if (std::fabs(y[i] - lambda * s) > tol) return false;
        }
    }
    return true;
}

bool subdiff_member_l0(const Vec& z, const Vec& y, double /*lambda*/, double tol) {
    if (z.size() != y.size()) throw std::invalid_argument("subdiff_member_l0: dims");
    for (size_t i = 0; i < z.size(); ++i) {
        // at z_i = 0 the limiting subdifferential of the counting function is
        // the whole line; away from 0 it is {0}
        if (std::fabs(z[i]) > tol && std::fabs(y[i]) > tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// smooth builders
// ---------------------------------------------------------------------------

SmoothFunction make_least_squares(const Matrix& b_mat, const Vec& b) {
    if (static_cast<int>(b.size()) != b_mat.rows) {
        throw std::invalid_argument("make_least_squares: dim(b) != rows(B)");
    }
    SmoothFunction h;
    h.dim = b_mat.cols;
    const Matrix hess = b_mat.gram();
    Vec q = b_mat.apply_adjoint(b);
    for (double& v : q) v = -v;
    const double c = 0.5 * dot(b, b);
    h.quadratic = SmoothFunction::Quadratic{hess, q, c};
    h.lipschitz = std::max(0.0, sym_eig_max(hess));
    h.bounded_below = true;
    h.coercive = sym_eig_min(hess) > 1e-10 * std::max(1.0, h.lipschitz);
    h.eval = [b_mat, b](const Vec& x) {
        const Vec r = sub(b_mat.apply(x), b);
        return 0.5 * dot(r, r);
    };
    h.grad = [b_mat, b](const Vec& x) {
        return b_mat.apply_adjoint(sub(b_mat.apply(x), b));
    };
    h.prox = [hess, q](const Vec& v, double t) {
        // argmin 1/2||Bw-b||^2 + ||v-w||^2/(2t)  <=>  (I + t H) w = v - t q
        Matrix sys = mat_scale(t, hess);
        for (int i = 0; i < sys.rows; ++i) sys(i, i) += 1.0;
        return cholesky_solve(sys, axpy(v, -t, q));
    };
    h.name = "least_squares";
    return h;
}

SmoothFunction make_scaled_distance(int dim, double lam, const Vec& center) {
    if (static_cast<int>(center.size()) != dim) {
        throw std::invalid_argument("make_scaled_distance: dims");
    }
    SmoothFunction h;
    h.dim = dim;
    h.lipschitz = lam;
    h.bounded_below = true;
    h.coercive = lam > 0.0;
    Matrix hess = mat_scale(lam, Matrix::identity(dim));
    Vec q = scale(-lam, center);
    h.quadratic = SmoothFunction::Quadratic{hess, q, 0.5 * lam * dot(center, center)};
    h.eval = [lam, center](const Vec& x) {
        const Vec d = sub(x, center);
        return 0.5 * lam * dot(d, d);
    };
    h.grad = [lam, center](const Vec& x) { return scale(lam, sub(x, center)); };
    h.prox = [lam, center](const Vec& v, double t) {
        Vec w(v.size());
        for (size_t i = 0; i < v.size(); ++i) w[i] = (v[i] + t * lam * center[i]) / (1.0 + t * lam);
        return w;
    };
    h.name = "scaled_distance";
    return h;
}

SmoothFunction make_zero_smooth(int dim) {
    SmoothFunction h;
    h.dim = dim;
    h.lipschitz = 0.0;
    h.bounded_below = true;
    h.coercive = false;
    h.quadratic = SmoothFunction::Quadratic{Matrix(dim, dim), zeros(dim), 0.0};
    h.eval = [](const Vec&) { return 0.0; };
    h.grad = [dim](const Vec&) { return zeros(dim); };
    h.prox = [](const Vec& v, double) { return v; };
    h.name = "zero";
    return h;
}

// ---------------------------------------------------------------------------
// prox builders
// ---------------------------------------------------------------------------

ProxFunction make_l1(int dim, double lambda) {
    ProxFunction g;
    g.dim = dim;
    g.coercive = true;
    g.bounded_below = true;
    g.eval = [lambda](const Vec& z) {
        double s = 0.0;
        for (double v : z) s += std::fabs(v);
        return lambda * s;
    };
    g.prox = [lambda](const Vec& v, double gamma) { return prox_l1(v, gamma, lambda); };
    g.subdiff_member = [lambda](const Vec& z, const Vec& y, double tol) {
        return subdiff_member_l1(z, y, lambda, tol);
    };
    g.name = "l1";
    return g;
}

ProxFunction make_l0(int dim, double lambda) {
    ProxFunction g;
    g.dim = dim;
    g.coercive = false;
    g.bounded_below = true;
    g.eval = [lambda](const Vec& z) {
        int nz = 0;
        for (double v : z)
            if (v != 0.0) ++nz;
        return lambda * nz;
    };
    g.prox = [lambda](const Vec& v, double gamma) { return prox_l0(v, gamma, lambda); };
    g.subdiff_member = [lambda](const Vec& z, const Vec& y, double tol) {
        return subdiff_member_l0(z, y, lambda, tol);
    };
    g.name = "l0";
    return g;
}

ProxFunction make_box(Vec lower, Vec upper) {
    if (lower.size() != upper.size()) throw std::invalid_argument("make_box: dims");
    for (size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] > upper[i]) throw std::invalid_argument("make_box: lower > upper");
    }
    ProxFunction g;
    g.dim = static_cast<int>(lower.size());
    g.coercive = true;  // indicator of a compact box
    g.bounded_below = true;
    g.eval = [lower, upper](const Vec& z) {
        for (size_t i = 0; i < z.size(); ++i) {
            if (z[i] < lower[i] - 1e-12 || z[i] > upper[i] + 1e-12) return kInf;
        }
        return 0.0;
    };
    g.prox = [lower, upper](const Vec& v, double) { return prox_box(v, lower, upper); };
    g.subdiff_member = [lower, upper](const Vec& z, const Vec& y, double tol) {
        // normal cone of the box
        for (size_t i = 0; i < z.size(); ++i) {
            if (z[i] < lower[i] - tol || z[i] > upper[i] + tol) return false;
            const bool at_lo = z[i] <= lower[i] + tol;
            const bool at_hi = z[i] >= upper[i] - tol;
            if (at_lo && at_hi) continue;  // degenerate interval, whole line
            if (at_lo && y[i] > tol) return false;
            if (at_hi && y[i] < -tol) return false;
            if (!at_lo && !at_hi && std::fabs(y[i]) > tol) return false;
        }
        return true;
    };
    g.name = "box";
    return g;
}

ProxFunction make_quadratic_penalty(int dim, double lambda, Vec center) {
    if (static_cast<int>(center.size()) != dim) {
        throw std::invalid_argument("make_quadratic_penalty: dims");
    }
    ProxFunction g;
    g.dim = dim;
    g.coercive = lambda > 0.0;
    g.bounded_below = true;
    g.eval = [lambda, center](const Vec& z) {
        const Vec d = sub(z, center);
        return 0.5 * lambda * dot(d, d);
    };
    g.prox = [lambda, center](const Vec& v, double gamma) {
        return prox_quadratic(v, gamma, center, lambda);
    };
    g.subdiff_member = [lambda, center](const Vec& z, const Vec& y, double tol) {
        for (size_t i = 0; i < z.size(); ++i) {
            if (std::fabs(y[i] - lambda * (z[i] - center[i])) > tol) return false;
        }
        return true;
    };
    g.name = "quadratic";
    return g;
}

ProxFunction make_zero_prox(int dim) {
    ProxFunction g;
    g.dim = dim;
    g.coercive = false;
    g.bounded_below = true;
    g.eval = [](const Vec&) { return 0.0; };
    g.prox = [](const Vec& v, double) { return v; };
    g.subdiff_member = [](const Vec&, const Vec& y, double tol) {
        return norm_inf(y) <= tol;
    };
    g.name = "zero";
    return g;
}

// ---------------------------------------------------------------------------
// validation oracles
// ---------------------------------------------------------------------------

Vec prox_oracle(const ProxFunction& g, const Vec& v, double gamma, double lo, double hi,
                double step) {
    const size_t d = v.size();
    if (d == 0 || d > 2) throw std::invalid_argument("prox_oracle: dim must be 1 or 2");
    if (step <= 0.0 || hi < lo) throw std::invalid_argument("prox_oracle: empty grid");
    const int np = static_cast<int>(std::floor((hi - lo) / step)) + 1;
    if (np <= 0) throw std::invalid_argument("prox_oracle: empty grid");

    const auto objective = [&](const Vec& w) {
        const Vec dvw = sub(v, w);
        return g.eval(w) + dot(dvw, dvw) / (2.0 * gamma);
    };

    Vec best;
    double best_val = kInf;
    Vec w(d);
    for (int i = 0; i < np; ++i) {
        w[0] = lo + i * step;
        if (d == 1) {
            const double val = objective(w);
            if (val < best_val) {
                best_val = val;
                best = w;
            }
        } else {
            for (int j = 0; j < np; ++j) {
                w[1] = lo + j * step;
                const double val = objective(w);
                if (val < best_val) {
                    best_val = val;
                    best = w;
                }
            }
        }
    }
    return best;
}

double grad_check(const SmoothFunction& h, const Vec& x) {
    const double step = 1e-5;
    const Vec g = h.grad(x);
    double worst = 0.0;
    Vec xp = x, xm = x;
    for (size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        const double fd = (h.eval(xp) - h.eval(xm)) / (2.0 * step);
        xp[i] = x[i];
        xm[i] = x[i];
        worst = std::max(worst, std::fabs(g[i] - fd) / (1.0 + std::fabs(g[i])));
    }
    return worst;
}

static bool semiconvex_at(const SmoothFunction& h, const Vec& x, const Vec& y, const Vec& z) {
    const Vec d = sub(y, x);
    const double lhs = h.eval(y);
    const double rhs = h.eval(x) + dot(h.grad(z), d) + 0.5 * h.lipschitz * dot(d, d);
    return lhs <= rhs + 1e-9 * (1.0 + std::fabs(rhs));
}

bool semiconvexity_check(const SmoothFunction& h, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("semiconvexity_check: samples >= 1");
    Lcg64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        Vec x(h.dim), y(h.dim);
        for (int i = 0; i < h.dim; ++i) {
            x[i] = rng.next_uniform(-5.0, 5.0);
            y[i] = rng.next_uniform(-5.0, 5.0);
        }
        const Vec mid = scale(0.5, add(x, y));
        if (!semiconvex_at(h, x, y, x)) return false;
        if (!semiconvex_at(h, x, y, y)) return false;
        if (!semiconvex_at(h, x, y, mid)) return false;
    }
    return true;
}

bool descent_lemma_check(const SmoothFunction& h, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("descent_lemma_check: samples >= 1");
    Lcg64 rng(seed ^ 0x5bd1e995);
    for (int s = 0; s < samples; ++s) {
        Vec x(h.dim), y(h.dim);
        for (int i = 0; i < h.dim; ++i) {
            x[i] = rng.next_uniform(-5.0, 5.0);
            y[i] = rng.next_uniform(-5.0, 5.0);
        }
        if (!semiconvex_at(h, x, y, x)) return false;
    }
    return true;
}

}  // namespace padmm

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "padmm/linops.hpp"

namespace padmm {

// ---------------------------------------------------------------------------
// smooth term h: differentiable with L-Lipschitz gradient
// ---------------------------------------------------------------------------

struct SmoothFunction {
    int dim = 0;
    std::function<double(const Vec&)> eval;
    std::function<Vec(const Vec&)> grad;
    double lipschitz = 0.0;
    bool bounded_below = false;
    bool coercive = false;

    /// Present when h is a quadratic 1/2 x'Hx + q'x + c; enables exact
    /// closed-form x-subproblem solves.
    struct Quadratic {
        Matrix hessian;
        Vec linear;
        double constant = 0.0;
    };
    std::optional<Quadratic> quadratic;

    /// prox_{t h}(v); empty when no closed form is available.
    std::function<Vec(const Vec&, double)> prox;

    std::string name;
};

// ---------------------------------------------------------------------------
// nonsmooth term g: proper lsc with a chosen prox selection
// ---------------------------------------------------------------------------

struct ProxFunction {
    int dim = 0;
    std::function<double(const Vec&)> eval;  // may return +infinity
    std::function<Vec(const Vec&, double)> prox;  // (v, gamma) -> one argmin
    std::function<bool(const Vec&, const Vec&, double)> subdiff_member;  // (z, y, tol)
    bool coercive = false;
    bool bounded_below = false;
    std::string name;
};

// ---------------------------------------------------------------------------
// closed-form proximal maps
// ---------------------------------------------------------------------------

/// Soft thresholding: componentwise sign(v) * max(|v| - gamma*lambda, 0).
Vec prox_l1(const Vec& v, double gamma, double lambda);

/// Hard thresholding: v_i if |v_i| > sqrt(2*gamma*lambda), else 0.
/// Ties return 0 (the sparser minimizer).
Vec prox_l0(const Vec& v, double gamma, double lambda);

/// Projection onto the box [lower, upper]; throws on malformed bounds.
Vec prox_box(const Vec& v, const Vec& lower, const Vec& upper);

/// Prox of g(z) = lambda/2 ||z - c||^2: (v + gamma*lambda*c) / (1 + gamma*lambda).
Vec prox_quadratic(const Vec& v, double gamma, const Vec& c, double lambda);

// ---------------------------------------------------------------------------
// limiting-subdifferential membership tests
// ---------------------------------------------------------------------------

bool subdiff_member_l1(const Vec& z, const Vec& y, double lambda, double tol);
bool subdiff_member_l0(const Vec& z, const Vec& y, double lambda, double tol);

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

/// h(x) = 1/2 ||Bx - b||^2 with L = lambda_max(B'B); coercive iff B injective.
SmoothFunction make_least_squares(const Matrix& b_mat, const Vec& b);
/// h(x) = lam/2 ||x - c||^2.
SmoothFunction make_scaled_distance(int dim, double lam, const Vec& center);
SmoothFunction make_zero_smooth(int dim);

ProxFunction make_l1(int dim, double lambda);
ProxFunction make_l0(int dim, double lambda);
ProxFunction make_box(Vec lower, Vec upper);
ProxFunction make_quadratic_penalty(int dim, double lambda, Vec center);
ProxFunction make_zero_prox(int dim);

// ---------------------------------------------------------------------------
// validation oracles
// ---------------------------------------------------------------------------

/// Brute-force grid argmin of g(w) + ||v - w||^2 / (2 gamma) over the grid
/// [lo, hi]^dim with the given step. dim(v) must be 1 or 2; throws otherwise
/// or on an empty grid.
Vec prox_oracle(const ProxFunction& g, const Vec& v, double gamma, double lo, double hi,
                double step);

/// Max over coordinates of |analytic - central difference| / (1 + |analytic|),
/// central step 1e-5.
double grad_check(const SmoothFunction& h, const Vec& x);

/// Checks Psi(y) <= Psi(x) + <grad Psi(z), y - x> + L/2 ||y - x||^2 for random
/// x, y and z in {x, y, midpoint}, within 1e-9 slack.
bool semiconvexity_check(const SmoothFunction& h, int samples, std::uint64_t seed);

/// Descent-lemma spot check (the z = x instance) on random pairs.
bool descent_lemma_check(const SmoothFunction& h, int samples, std::uint64_t seed);

}  // namespace padmm

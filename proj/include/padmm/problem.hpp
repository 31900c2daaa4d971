#pragma once

#include "padmm/functions.hpp"
#include "padmm/linops.hpp"

namespace padmm {

/// The composite problem min g(Ax) + h(x).
struct ProblemSpec {
    SmoothFunction h;  // smooth part, gradient L-Lipschitz
    ProxFunction g;    // nonsmooth part with prox selection
    LinearMap A;

    int n() const { return A.cols(); }
    int m() const { return A.rows(); }
};

}  // namespace padmm

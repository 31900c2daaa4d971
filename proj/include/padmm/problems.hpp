#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "padmm/problem.hpp"

namespace padmm {

enum class OracleKind { ClosedForm, SupportEnumeration, GridSearch, Reference, None };

const char* to_string(OracleKind k);

struct Oracle {
    OracleKind kind = OracleKind::None;
    Vec x, z, y;
    double objective = 0.0;
};

struct TestProblem {
    ProblemSpec spec;
    std::optional<Oracle> oracle;
    std::uint64_t seed = 0;
    std::string descriptor;
};

/// h = 1/2 ||Bx - b||^2 (random full-rank B), g = 1/2 ||z - c||^2, A random
/// full-row-rank (m <= n). ClosedForm oracle from the KKT linear system.
TestProblem quadratic_quadratic(int n, int m, std::uint64_t seed);

/// h = 1/2 ||Bx - b||^2, g = lambda ||.||_1, A full row rank. GridSearch
/// oracle for n <= 2; a long solver run tagged Reference otherwise.
TestProblem lasso_problem(int n, int m, int sparsity, double lambda, std::uint64_t seed);

/// h = 1/2 ||Bx - b||^2, g = lambda ||.||_0, A = Id (m = n). Global minimum by
/// enumerating all 2^n supports; n > 10 is rejected.
TestProblem l0_least_squares(int n, int m, double lambda, std::uint64_t seed);

struct KktCheckResult {
    bool ok = false;
    double stationarity = 0.0;
    double feasibility = 0.0;
    bool membership = false;
};

KktCheckResult kkt_check(const TestProblem& p, const Vec& x, const Vec& z, const Vec& y,
                         double tol);

}  // namespace padmm

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "padmm/linops.hpp"
#include "padmm/rng.hpp"

using namespace padmm;

namespace {

Matrix from_rows(int rows, int cols, std::initializer_list<double> vals) {
    Matrix m(rows, cols);
    size_t i = 0;
    for (double v : vals) m.a[i++] = v;
    return m;
}

Matrix random_matrix(int rows, int cols, Lcg64& rng) {
    Matrix m(rows, cols);
    for (double& v : m.a) v = rng.next_normal();
    return m;
}

}  // namespace

TEST_CASE("apply: identity, hand product, zero map") {
    const LinearMap id2(Matrix::identity(2));
    CHECK(id2.apply({1.0, 2.0}) == Vec{1.0, 2.0});

    const LinearMap row(from_rows(1, 2, {1.0, 1.0}));
    CHECK(row.apply({1.0, 2.0}) == Vec{3.0});

    const LinearMap zero(Matrix(2, 2));
    CHECK(zero.apply({5.0, 7.0}) == Vec{0.0, 0.0});

    CHECK_THROWS_AS(id2.apply({1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("lambda_min of AA* and A*A") {
    const LinearMap id2(Matrix::identity(2));
    CHECK(id2.lambda_min_AAt() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id2.lambda_min_AtA() == doctest::Approx(1.0).epsilon(1e-12));

    const LinearMap diag(from_rows(2, 2, {2.0, 0.0, 0.0, 3.0}));
    CHECK(diag.lambda_min_AAt() == doctest::Approx(4.0).epsilon(1e-12));

    // rank-1 AA*: rows both (1, 0)
    const LinearMap rank1(from_rows(2, 2, {1.0, 0.0, 1.0, 0.0}));
    CHECK(rank1.lambda_min_AAt() == 0.0);

    const LinearMap tall(from_rows(2, 1, {1.0, 1.0}));
    CHECK(tall.lambda_min_AtA() == doctest::Approx(2.0).epsilon(1e-12));

    const LinearMap wide(from_rows(1, 2, {1.0, 1.0}));
    CHECK(wide.lambda_min_AtA() == 0.0);
}

TEST_CASE("metric seminorm and Loewner ordering") {
    const MetricMatrix id = MetricMatrix::scaled_identity(2, 1.0);
    CHECK(metric_norm_sq(id, {3.0, 4.0}) == doctest::Approx(25.0));

    const MetricMatrix zero = MetricMatrix::zero(3);
    CHECK(metric_norm_sq(zero, {1.0, 2.0, 3.0}) == 0.0);

    const MetricMatrix diag(from_rows(2, 2, {2.0, 0.0, 0.0, 0.0}));
    CHECK(metric_norm_sq(diag, {1.0, 5.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(metric_norm_sq(diag, {1.0, 2.0, 3.0}), std::invalid_argument);

    CHECK(loewner_check(MetricMatrix::scaled_identity(2, 2.0), 1.0));
    CHECK_FALSE(loewner_check(MetricMatrix::scaled_identity(2, 2.0), 3.0));
    CHECK(loewner_check(MetricMatrix(from_rows(2, 2, {1.0, 0.0, 0.0, 4.0})), 1.0));

    double s = 0.0;
    CHECK(MetricMatrix::scaled_identity(3, 2.5).is_scalar_identity(s));
    CHECK(s == 2.5);
    CHECK_FALSE(MetricMatrix(from_rows(2, 2, {1.0, 0.5, 0.5, 1.0})).is_scalar_identity(s));

    CHECK_THROWS_AS(MetricMatrix(from_rows(2, 2, {1.0, 0.3, 0.2, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("adjoint consistency on random maps") {
    Lcg64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 6);
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        const LinearMap a(random_matrix(m, n, rng));
        Vec x(n), y(m);
        for (double& v : x) v = rng.next_normal();
        for (double& v : y) v = rng.next_normal();
        const double lhs = dot(a.apply(x), y);
        const double rhs = dot(x, a.apply_adjoint(y));
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + norm(x) * norm(y)));
    }
}

TEST_CASE("eigenvalue bound lambda_min(AA*) ||y||^2 <= ||A*y||^2") {
    Lcg64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 4);
        const int n = m + static_cast<int>(rng.next_u64() % 4);
        const LinearMap a(random_matrix(m, n, rng));
        Vec y(m);
        for (double& v : y) v = rng.next_normal();
        const double lhs = a.lambda_min_AAt() * dot(y, y);
        const Vec ay = a.apply_adjoint(y);
        const double rhs = dot(ay, ay);
        CHECK(lhs <= rhs * (1.0 + 1e-10) + 1e-10);
    }
}

TEST_CASE("operator norm dominates ||Av||") {
    Lcg64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 5);
        const int n = 1 + static_cast<int>(rng.next_u64() % 5);
        const LinearMap a(random_matrix(m, n, rng));
        Vec v(n);
        for (double& u : v) u = rng.next_normal();
        CHECK(norm(a.apply(v)) <= a.op_norm() * norm(v) * (1.0 + 1e-10) + 1e-12);
    }
}

TEST_CASE("op_norm matches the largest singular value on a known matrix") {
    // singular values of [[3,0],[4,0]] are 5 and 0
    const LinearMap a(from_rows(2, 2, {3.0, 0.0, 4.0, 0.0}));
    CHECK(a.op_norm() == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("jacobi eigenvalues on a known symmetric matrix") {
    // eigenvalues of [[2,1],[1,2]] are 1 and 3
    const auto ev = jacobi_eigenvalues(from_rows(2, 2, {2.0, 1.0, 1.0, 2.0}));
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cholesky and CG solve SPD systems") {
    Lcg64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        Matrix b = random_matrix(n, n, rng);
        for (int i = 0; i < n; ++i) b(i, i) += 3.0;
        const Matrix s = b.gram();
        Vec rhs(n);
        for (double& v : rhs) v = rng.next_normal();
        const Vec x1 = cholesky_solve(s, rhs);
        const CgResult cg = cg_solve(s, rhs, 1e-13);
        CHECK(cg.converged);
        CHECK(norm(sub(s.apply(x1), rhs)) <= 1e-8 * (1.0 + norm(rhs)));
        CHECK(norm(sub(x1, cg.x)) <= 1e-8 * (1.0 + norm(x1)));
    }
    CHECK_THROWS_AS(cholesky_solve(from_rows(2, 2, {1.0, 0.0, 0.0, -1.0}), {1.0, 1.0}),
                    std::runtime_error);
}

TEST_CASE("matrix text round trip") {
    Lcg64 rng(23);
    const Matrix m = random_matrix(3, 4, rng);
    std::stringstream ss;
    write_matrix_text(ss, m);
    const Matrix back = read_matrix_text(ss);
    REQUIRE(back.rows == 3);
    REQUIRE(back.cols == 4);
    for (size_t i = 0; i < m.a.size(); ++i) CHECK(back.a[i] == m.a[i]);

    std::stringstream bad("2 2\n1.0 2.0\n3.0");
    CHECK_THROWS_AS(read_matrix_text(bad), std::runtime_error);
}

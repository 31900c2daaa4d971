#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padmm {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// dense vector helpers
// ---------------------------------------------------------------------------

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double norm_inf(const Vec& a);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(double s, const Vec& a);
/// a + s*b
Vec axpy(const Vec& a, double s, const Vec& b);
Vec zeros(int n);

// ---------------------------------------------------------------------------
// dense matrices (row-major, desk scale)
// ---------------------------------------------------------------------------

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // row-major, rows*cols entries

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    static Matrix identity(int n);

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    Vec apply(const Vec& x) const;          // A x
    Vec apply_adjoint(const Vec& y) const;  // A^T y
    Matrix transpose() const;
    Matrix gram() const;        // A^T A (cols x cols)
    Matrix gram_outer() const;  // A A^T (rows x rows)
    bool is_symmetric(double tol = 0.0) const;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix mat_add(const Matrix& a, const Matrix& b);
Matrix mat_scale(double s, const Matrix& a);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotation sweeps,
/// returned in ascending order. Convergence: off-diagonal Frobenius norm
/// below tol relative to the matrix scale.
std::vector<double> jacobi_eigenvalues(Matrix s, double tol = 1e-12, int max_sweeps = 128);

double sym_eig_min(const Matrix& s);
double sym_eig_max(const Matrix& s);

/// Cholesky factorization of a symmetric positive definite matrix, reusable
/// across solves. Throws std::runtime_error if a pivot collapses.
class CholeskyFactor {
 public:
    explicit CholeskyFactor(Matrix s);
    Vec solve(Vec b) const;
    int dim() const { return l_.rows; }

 private:
    Matrix l_;  // lower triangle
};

/// One-shot solve S x = b for symmetric positive definite S.
Vec cholesky_solve(Matrix s, Vec b);

struct CgResult {
    Vec x;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Conjugate gradients on a symmetric PSD system, relative tolerance on the
/// residual norm. max_iter < 0 picks 10n.
CgResult cg_solve(const Matrix& s, const Vec& b, double tol = 1e-12, int max_iter = -1);

// ---------------------------------------------------------------------------
// LinearMap: the operator A with its cached spectral quantities
// ---------------------------------------------------------------------------

class LinearMap {
 public:
    LinearMap() = default;
    explicit LinearMap(Matrix m);

    int rows() const { return mat_.rows; }
    int cols() const { return mat_.cols; }
    const Matrix& matrix() const { return mat_; }

    /// A x; throws std::invalid_argument on dimension mismatch.
    Vec apply(const Vec& x) const;
    /// A^* y; throws std::invalid_argument on dimension mismatch.
    Vec apply_adjoint(const Vec& y) const;

    double op_norm() const { return op_norm_; }
    /// Smallest eigenvalue of AA^*; > 0 iff A surjective. Values below
    /// 1e-10 * ||A||^2 are clamped to 0.
    double lambda_min_AAt() const { return lam_min_aat_; }
    /// Smallest eigenvalue of A^*A; > 0 iff A injective.
    double lambda_min_AtA() const { return lam_min_ata_; }

 private:
    Matrix mat_;
    double op_norm_ = 0.0;
    double lam_min_aat_ = 0.0;
    double lam_min_ata_ = 0.0;
};

// ---------------------------------------------------------------------------
// MetricMatrix: symmetric PSD metric with cached spectral norm
// ---------------------------------------------------------------------------

class MetricMatrix {
 public:
    MetricMatrix() = default;
    /// Throws std::invalid_argument if the matrix is not stored symmetric.
    explicit MetricMatrix(Matrix sym);

    static MetricMatrix zero(int n);
    static MetricMatrix scaled_identity(int n, double s);

    int dim() const { return mat_.rows; }
    const Matrix& matrix() const { return mat_; }
    /// Spectral norm (largest absolute eigenvalue).
    double spectral_norm() const { return mu_; }
    Vec apply(const Vec& v) const;

    bool is_zero() const;
    /// True when M = s*Id exactly as stored; s returned through scalar.
    bool is_scalar_identity(double& scalar) const;

 private:
    Matrix mat_;
    double mu_ = 0.0;
};

/// <Mv, v>; throws std::invalid_argument on dimension mismatch.
double metric_norm_sq(const MetricMatrix& m, const Vec& v);

/// True iff M - alpha*Id has smallest eigenvalue >= -1e-10 * max(1, ||M||).
bool loewner_check(const MetricMatrix& m, double alpha);

// ---------------------------------------------------------------------------
// matrix text format: first line "m n", then m rows of n decimal scalars
// ---------------------------------------------------------------------------

Matrix read_matrix_text(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix_text(std::ostream& out, const Matrix& m);

}  // namespace padmm

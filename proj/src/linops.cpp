#include "padmm/linops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace padmm {

// ---------------------------------------------------------------------------
// vector helpers
// ---------------------------------------------------------------------------

static void check_same_dim(const Vec& a, const Vec& b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

double dot(const Vec& a, const Vec& b) {
    check_same_dim(a, b, "dot");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::fabs(v));
    return s;
}

Vec add(const Vec& a, const Vec& b) {
    check_same_dim(a, b, "add");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    check_same_dim(a, b, "sub");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(double s, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

Vec axpy(const Vec& a, double s, const Vec& b) {
    check_same_dim(a, b, "axpy");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
}

Vec zeros(int n) { return Vec(static_cast<size_t>(n), 0.0); }

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vec Matrix::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != cols) {
        throw std::invalid_argument("Matrix::apply: dimension mismatch");
    }
    Vec y(static_cast<size_t>(rows), 0.0);
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        const double* row = &a[static_cast<size_t>(i) * cols];
        for (int j = 0; j < cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vec Matrix::apply_adjoint(const Vec& y) const {
    if (static_cast<int>(y.size()) != rows) {
        throw std::invalid_argument("Matrix::apply_adjoint: dimension mismatch");
    }
    Vec x(static_cast<size_t>(cols), 0.0);
    for (int i = 0; i < rows; ++i) {
        const double* row = &a[static_cast<size_t>(i) * cols];
        const double yi = y[i];
        for (int j = 0; j < cols; ++j) x[j] += row[j] * yi;
    }
    return x;
}

Matrix Matrix::transpose() const {
    Matrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::gram() const {
    Matrix g(cols, cols);
    for (int i = 0; i < cols; ++i) {
        for (int j = i; j < cols; ++j) {
            double s = 0.0;
            for (int k = 0; k < rows; ++k) s += (*this)(k, i) * (*this)(k, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

Matrix Matrix::gram_outer() const {
    Matrix g(rows, rows);
    for (int i = 0; i < rows; ++i) {
        for (int j = i; j < rows; ++j) {
            double s = 0.0;
            const double* ri = &a[static_cast<size_t>(i) * cols];
            const double* rj = &a[static_cast<size_t>(j) * cols];
            for (int k = 0; k < cols; ++k) s += ri[k] * rj[k];
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

bool Matrix::is_symmetric(double tol) const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
        for (int j = i + 1; j < cols; ++j)
            if (std::fabs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
    Matrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) {
        throw std::invalid_argument("mat_add: dimension mismatch");
    }
    Matrix c = a;
    for (size_t i = 0; i < c.a.size(); ++i) c.a[i] += b.a[i];
    return c;
}

Matrix mat_scale(double s, const Matrix& a) {
    Matrix c = a;
    for (double& v : c.a) v *= s;
    return c;
}

// ---------------------------------------------------------------------------
// symmetric eigenvalues: cyclic Jacobi sweeps
// ---------------------------------------------------------------------------

static double off_diagonal_norm(const Matrix& s) {
    double o = 0.0;
    for (int i = 0; i < s.rows; ++i)
        for (int j = i + 1; j < s.cols; ++j) o += 2.0 * s(i, j) * s(i, j);
    return std::sqrt(o);
}

std::vector<double> jacobi_eigenvalues(Matrix s, double tol, int max_sweeps) {
    if (s.rows != s.cols) throw std::invalid_argument("jacobi_eigenvalues: not square");
    const int n = s.rows;
    if (n == 0) return {};
    if (n == 1) return {s(0, 0)};

    double scale = 0.0;
    for (double v : s.a) scale = std::max(scale, std::fabs(v));
    const double stop = tol * std::max(scale, 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(s) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double app = s(p, p);
                const double aqq = s(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                // smaller-root tangent keeps rotations bounded
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double skp = s(k, p);
                    const double skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    const double spk = s(p, k);
                    const double sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }

    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[i] = s(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

double sym_eig_min(const Matrix& s) { return jacobi_eigenvalues(s).front(); }
double sym_eig_max(const Matrix& s) { return jacobi_eigenvalues(s).back(); }

// ---------------------------------------------------------------------------
// linear solves
// ---------------------------------------------------------------------------

CholeskyFactor::CholeskyFactor(Matrix s) : l_(std::move(s)) {
    const int n = l_.rows;
    if (l_.cols != n) throw std::invalid_argument("CholeskyFactor: not square");
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(l_(i, i)));
    // factor in place: s = L L^T, lower triangle
    for (int j = 0; j < n; ++j) {
        double d = l_(j, j);
        for (int k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
        if (d <= 1e-14 * std::max(scale, 1.0)) {
            throw std::runtime_error("cholesky: matrix not positive definite");
        }
        const double ljj = std::sqrt(d);
        l_(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double v = l_(i, j);
            for (int k = 0; k < j; ++k) v -= l_(i, k) * l_(j, k);
            l_(i, j) = v / ljj;
        }
    }
}

Vec CholeskyFactor::solve(Vec b) const {
    const int n = l_.rows;
    if (static_cast<int>(b.size()) != n) {
        throw std::invalid_argument("CholeskyFactor::solve: dimension mismatch");
    }
    for (int i = 0; i < n; ++i) {
        double v = b[i];
        for (int k = 0; k < i; ++k) v -= l_(i, k) * b[k];
        b[i] = v / l_(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double v = b[i];
        for (int k = i + 1; k < n; ++k) v -= l_(k, i) * b[k];
        b[i] = v / l_(i, i);
    }
    return b;
}

Vec cholesky_solve(Matrix s, Vec b) { return CholeskyFactor(std::move(s)).solve(std::move(b)); }

CgResult cg_solve(const Matrix& s, const Vec& b, double tol, int max_iter) {
    const int n = s.rows;
    if (s.cols != n || static_cast<int>(b.size()) != n) {
        throw std::invalid_argument("cg_solve: dimension mismatch");
    }
    if (max_iter < 0) max_iter = 10 * n;
    CgResult res;
    res.x = zeros(n);
    Vec r = b;
    Vec p = r;
    double rr = dot(r, r);
    const double bnorm = std::max(norm(b), 1e-300);
    res.residual = std::sqrt(rr) / bnorm;
    if (res.residual <= tol) {
        res.converged = true;
        return res;
    }
    for (int it = 0; it < max_iter; ++it) {
        const Vec sp = s.apply(p);
        const double psp = dot(p, sp);
        if (psp <= 0.0) {
            throw std::runtime_error("cg_solve: system is not positive definite");
        }
        const double alpha = rr / psp;
        for (int i = 0; i < n; ++i) res.x[i] += alpha * p[i];
        for (int i = 0; i < n; ++i) r[i] -= alpha * sp[i];
        const double rr_new = dot(r, r);
        res.iterations = it + 1;
        res.residual = std::sqrt(rr_new) / bnorm;
        if (res.residual <= tol) {
            res.converged = true;
            return res;
        }
        const double beta = rr_new / rr;
        rr = rr_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return res;
}

// ---------------------------------------------------------------------------
// LinearMap
// ---------------------------------------------------------------------------

LinearMap::LinearMap(Matrix m) : mat_(std::move(m)) {
    const Matrix ata = mat_.gram();
    const Matrix aat = mat_.gram_outer();
    const double top = std::max(0.0, sym_eig_max(ata));
    op_norm_ = std::sqrt(top);
    const double clamp = 1e-10 * std::max(top, 1.0);
    const double aat_min = sym_eig_min(aat);
    const double ata_min = sym_eig_min(ata);
    lam_min_aat_ = (aat_min > clamp) ? aat_min : 0.0;
    lam_min_ata_ = (ata_min > clamp) ? ata_min : 0.0;
}

Vec LinearMap::apply(const Vec& x) const { return mat_.apply(x); }
Vec LinearMap::apply_adjoint(const Vec& y) const { return mat_.apply_adjoint(y); }

// ---------------------------------------------------------------------------
// MetricMatrix
// ---------------------------------------------------------------------------

MetricMatrix::MetricMatrix(Matrix sym) : mat_(std::move(sym)) {
    if (!mat_.is_symmetric()) {
        throw std::invalid_argument("MetricMatrix: matrix must be stored symmetric");
    }
    const auto ev = jacobi_eigenvalues(mat_);
    mu_ = ev.empty() ? 0.0 : std::max(std::fabs(ev.front()), std::fabs(ev.back()));
}

MetricMatrix MetricMatrix::zero(int n) { return MetricMatrix(Matrix(n, n)); }

MetricMatrix MetricMatrix::scaled_identity(int n, double s) {
    return MetricMatrix(mat_scale(s, Matrix::identity(n)));
}

Vec MetricMatrix::apply(const Vec& v) const { return mat_.apply(v); }

bool MetricMatrix::is_zero() const {
    for (double v : mat_.a)
        if (v != 0.0) return false;
    return true;
}

bool MetricMatrix::is_scalar_identity(double& scalar) const {
    if (mat_.rows == 0) {
        scalar = 0.0;
        return true;
    }
    const double s = mat_(0, 0);
    for (int i = 0; i < mat_.rows; ++i) {
        for (int j = 0; j < mat_.cols; ++j) {
            if (i == j ? mat_(i, j) != s : mat_(i, j) != 0.0) return false;
        }
    }
    scalar = s;
    return true;
}

double metric_norm_sq(const MetricMatrix& m, const Vec& v) {
    if (m.dim() != static_cast<int>(v.size())) {
        throw std::invalid_argument("metric_norm_sq: dimension mismatch");
    }
    return dot(m.apply(v), v);
}

bool loewner_check(const MetricMatrix& m, double alpha) {
    Matrix shifted = m.matrix();
    for (int i = 0; i < shifted.rows; ++i) shifted(i, i) -= alpha;
    const double lmin = sym_eig_min(shifted);
    return lmin >= -1e-10 * std::max(1.0, m.spectral_norm());
}

// ---------------------------------------------------------------------------
// matrix text io
// ---------------------------------------------------------------------------

Matrix read_matrix_text(std::istream& in) {
    int m = 0, n = 0;
    if (!(in >> m >> n) || m < 0 || n < 0) {
        throw std::runtime_error("matrix text: malformed header (expected 'm n')");
    }
    Matrix mat(m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!(in >> mat(i, j))) {
                throw std::runtime_error("matrix text: missing entries at row " +
                                         std::to_string(i));
            }
        }
    }
    return mat;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    return read_matrix_text(in);
}

void write_matrix_text(std::ostream& out, const Matrix& m) {
    out << m.rows << " " << m.cols << "\n";
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            if (j) out << " ";
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf;
        }
        out << "\n";
    }
}

}  // namespace padmm

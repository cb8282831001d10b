#include "lqdepth/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqdepth::linalg {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), v_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), v_(std::move(entries)) {
    require(v_.size() == rows * cols, "matrix entries do not match shape");
    for (double x : v_) require(std::isfinite(x), "matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    require(x.size() == a.cols(), "matvec dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_ptr(i);
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
    require(x.size() == a.rows(), "matvec dimension mismatch");
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* row = a.row_ptr(i);
        const double xi = x[i];
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += row[j] * xi;
    }
    return y;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.entries()) m = std::max(m, std::fabs(x));
    return m;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "dot dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector mean(const Matrix& points) {
    require(points.rows() >= 1, "mean of an empty cloud");
    const std::size_t n = points.rows(), d = points.cols();
    Vector m(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = points.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) m[j] += row[j];
    }
    for (double& x : m) x /= static_cast<double>(n);
    return m;
}

Matrix covariance(const Matrix& points) {
    require(points.rows() >= 2, "covariance needs at least two observations");
    const std::size_t n = points.rows(), d = points.cols();
    const Vector m = mean(points);
    Matrix cov(d, d);
    Vector diff(d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = points.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) diff[j] = row[j] - m[j];
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = j; k < d; ++k) cov(j, k) += diff[j] * diff[k];
    }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = j; k < d; ++k) {
            cov(j, k) /= static_cast<double>(n);
            cov(k, j) = cov(j, k);
        }
    return cov;
}

SpdFactor::SpdFactor(Matrix lower) : lower_(std::move(lower)) {
    require(lower_.rows() == lower_.cols(), "factor must be square");
}

Vector SpdFactor::half_solve(std::span<const double> b) const {
    const std::size_t d = dim();
    require(b.size() == d, "solve dimension mismatch");
    Vector y(d);
    for (std::size_t i = 0; i < d; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * y[k];
        y[i] = s / lower_(i, i);
    }
    return y;
}

Vector SpdFactor::solve(std::span<const double> b) const {
    Vector y = half_solve(b);
    const std::size_t d = dim();
    for (std::size_t ii = d; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < d; ++k) s -= lower_(k, ii) * y[k];
        y[ii] = s / lower_(ii, ii);
    }
    return y;
}

Matrix SpdFactor::reconstruct() const {
    const std::size_t d = dim();
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) s += lower_(i, k) * lower_(j, k);
            m(i, j) = s;
            m(j, i) = s;
        }
    return m;
}

SpdFactor spd_factorize(const Matrix& m) {
    require(m.rows() == m.cols(), "spd_factorize expects a square matrix");
    require(m.rows() >= 1, "spd_factorize expects a nonempty matrix");
    const std::size_t d = m.rows();
    const double scale = max_abs(m);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            require(std::fabs(m(i, j) - m(j, i)) <= 1e-12 * (1.0 + scale),
                    "spd_factorize expects a symmetric matrix");

    double max_diag = 0.0;
    for (std::size_t i = 0; i < d; ++i) max_diag = std::max(max_diag, std::fabs(m(i, i)));

    Matrix lower(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        double pivot = m(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= lower(j, k) * lower(j, k);
        if (!(pivot > 1e-13 * max_diag) || !std::isfinite(pivot))
            throw SingularCovariance("matrix is not positive definite");
        const double ljj = std::sqrt(pivot);
        lower(j, j) = ljj;
        for (std::size_t i = j + 1; i < d; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            lower(i, j) = s / ljj;
        }
    }
    return SpdFactor(std::move(lower));
}

NullspaceFactor::NullspaceFactor(const Matrix& c) : n_(c.cols()), r_(c.rows()) {
    require(r_ >= 1 && n_ >= r_, "constraint matrix must be wide (rows <= cols)");

    // Working copy of c^T with column pivoting; column j of `work` is
    // constraint row perm_[j] of c.
    Matrix work(n_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < n_; ++j) work(j, i) = c(i, j);
    perm_.resize(r_);
    for (std::size_t i = 0; i < r_; ++i) perm_[i] = i;

    reflectors_ = Matrix(n_, r_);
    taus_.assign(r_, 0.0);
    r_factor_ = Matrix(r_, r_);

    rank_ = r_;
    for (std::size_t j = 0; j < r_; ++j) {
        // Pivot on the remaining column with the largest norm.
        std::size_t best = j;
        double best_norm = -1.0;
        for (std::size_t k = j; k < r_; ++k) {
            double s = 0.0;
            for (std::size_t i = j; i < n_; ++i) s += work(i, k) * work(i, k);
            if (s > best_norm) {
                best_norm = s;
                best = k;
            }
        }
        if (best != j) {
            for (std::size_t i = 0; i < n_; ++i) std::swap(work(i, j), work(i, best));
            for (std::size_t i = 0; i < r_; ++i) std::swap(r_factor_(i, j), r_factor_(i, best));
            std::swap(perm_[j], perm_[best]);
        }

        double normx = std::sqrt(std::max(best_norm, 0.0));
        const double lead = work(j, j);
        if (j == 0 && normx == 0.0) {
            rank_ = 0;
            break;
        }
        if (normx <= 1e-10 * std::fabs(r_factor_(0, 0)) || normx == 0.0) {
            rank_ = j;
            break;
        }

        const double alpha = lead > 0.0 ? -normx : normx;
        const double v0 = lead - alpha;
        // Reflector stored with unit leading coefficient.
        reflectors_(j, j) = 1.0;
        for (std::size_t i = j + 1; i < n_; ++i) reflectors_(i, j) = work(i, j) / v0;
        taus_[j] = (alpha - lead) / alpha;

        r_factor_(j, j) = alpha;
        for (std::size_t k = j + 1; k < r_; ++k) {
            double s = work(j, k);
            for (std::size_t i = j + 1; i < n_; ++i) s += reflectors_(i, j) * work(i, k);
            s *= taus_[j];
            work(j, k) -= s;
            for (std::size_t i = j + 1; i < n_; ++i) work(i, k) -= s * reflectors_(i, j);
            r_factor_(j, k) = work(j, k);
        }
    }
}

Vector NullspaceFactor::q_apply(Vector y) const {
    require(y.size() == n_, "q_apply dimension mismatch");
    for (std::size_t jj = rank_; jj-- > 0;) {
        if (taus_[jj] == 0.0) continue;
        double s = y[jj];
        for (std::size_t i = jj + 1; i < n_; ++i) s += reflectors_(i, jj) * y[i];
        s *= taus_[jj];
        y[jj] -= s;
        for (std::size_t i = jj + 1; i < n_; ++i) y[i] -= s * reflectors_(i, jj);
    }
    return y;
}

Vector NullspaceFactor::q_apply_transposed(Vector y) const {
    require(y.size() == n_, "q_apply dimension mismatch");
    for (std::size_t j = 0; j < rank_; ++j) {
        if (taus_[j] == 0.0) continue;
        double s = y[j];
        for (std::size_t i = j + 1; i < n_; ++i) s += reflectors_(i, j) * y[i];
        s *= taus_[j];
        y[j] -= s;
        for (std::size_t i = j + 1; i < n_; ++i) y[i] -= s * reflectors_(i, j);
    }
    return y;
}

Vector NullspaceFactor::null_to_full(std::span<const double> z) const {
    require(z.size() == null_dim(), "null_to_full dimension mismatch");
    Vector y(n_, 0.0);
    std::copy(z.begin(), z.end(), y.begin() + static_cast<std::ptrdiff_t>(rank_));
    return q_apply(std::move(y));
}

Vector NullspaceFactor::full_to_null(std::span<const double> v) const {
    require(v.size() == n_, "full_to_null dimension mismatch");
    Vector y = q_apply_transposed(Vector(v.begin(), v.end()));
    return Vector(y.begin() + static_cast<std::ptrdiff_t>(rank_), y.end());
}

Vector NullspaceFactor::min_norm_solve(std::span<const double> rhs) const {
    require(rhs.size() == r_, "min_norm_solve dimension mismatch");
    const double tol = 1e-9 * (1.0 + max_abs(rhs));

    // Solve R^T y = P^T rhs on the leading rank_ rows, then check that the
    // rank-deficient tail is consistent.
    Vector y(n_, 0.0);
    for (std::size_t j = 0; j < rank_; ++j) {
        double s = rhs[perm_[j]];
        for (std::size_t k = 0; k < j; ++k) s -= r_factor_(k, j) * y[k];
        y[j] = s / r_factor_(j, j);
    }
    for (std::size_t j = rank_; j < r_; ++j) {
        double s = rhs[perm_[j]];
        for (std::size_t k = 0; k < rank_; ++k) s -= r_factor_(k, j) * y[k];
        if (std::fabs(s) > tol) throw Infeasible("right-hand side outside column space");
    }
    return q_apply(std::move(y));
}

Matrix NullspaceFactor::basis_matrix() const {
    const std::size_t k = null_dim();
    Matrix b(n_, k);
    Vector unit(n_, 0.0);
    for (std::size_t col = 0; col < k; ++col) {
        std::fill(unit.begin(), unit.end(), 0.0);
        unit[rank_ + col] = 1.0;
        Vector q = q_apply(unit);
        for (std::size_t i = 0; i < n_; ++i) b(i, col) = q[i];
    }
    return b;
}

Matrix nullspace_basis(const Matrix& c) {
    NullspaceFactor f(c);
    if (f.rank() < c.rows()) throw RankDeficient("constraint matrix lacks full row rank");
    return f.basis_matrix();
}

Vector min_norm_solution(const Matrix& c, std::span<const double> rhs) {
    return NullspaceFactor(c).min_norm_solve(rhs);
}

}  // namespace lqdepth::linalg

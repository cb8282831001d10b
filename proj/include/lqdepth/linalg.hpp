// Dense linear-algebra kernels: moments, Cholesky factors, null-space bases
// and minimum-norm solves of small underdetermined systems.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lqdepth/errors.hpp"

namespace lqdepth {

using Vector = std::vector<double>;

namespace linalg {

/// Dense row-major matrix of doubles. Entries are validated to be finite
/// whenever a matrix is built from caller-supplied data.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, Vector entries);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

    double* row_ptr(std::size_t r) { return v_.data() + r * cols_; }
    const double* row_ptr(std::size_t r) const { return v_.data() + r * cols_; }

    const Vector& entries() const { return v_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector v_;
};

Vector matvec(const Matrix& a, std::span<const double> x);
Vector matvec_transposed(const Matrix& a, std::span<const double> x);
double max_abs(const Matrix& a);
double max_abs(std::span<const double> v);
double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

/// Component-wise arithmetic mean of `points` (one observation per row).
Vector mean(const Matrix& points);

/// Population-style covariance of `points`, normalized by n (not n-1).
Matrix covariance(const Matrix& points);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
class SpdFactor {
public:
    SpdFactor() = default;
    explicit SpdFactor(Matrix lower);

    std::size_t dim() const { return lower_.rows(); }
    const Matrix& lower() const { return lower_; }

    /// Solves L y = b by forward substitution.
    Vector half_solve(std::span<const double> b) const;
    /// Solves (L L^T) y = b.
    Vector solve(std::span<const double> b) const;
    /// Rebuilds L L^T (used by consistency checks).
    Matrix reconstruct() const;

private:
    Matrix lower_;
};

/// Cholesky factorization; throws SingularCovariance when `m` is not
/// numerically positive definite.
SpdFactor spd_factorize(const Matrix& m);

/// Column-pivoted Householder QR of c^T for a wide matrix c (r x n, r <= n).
/// Gives the orthonormal null-space basis of c, minimum-norm solutions of
/// c p = rhs, and cheap application of the implicit Q factor. The null-space
/// basis is never materialized unless asked for, so applying it costs
/// O(n * r) rather than O(n^2).
class NullspaceFactor {
public:
    explicit NullspaceFactor(const Matrix& c);

    std::size_t n() const { return n_; }
    std::size_t constraint_rows() const { return r_; }
    std::size_t rank() const { return rank_; }
    std::size_t null_dim() const { return n_ - rank_; }

    /// q_apply(y) = Q y; q_apply_transposed(y) = Q^T y. Both length n.
    Vector q_apply(Vector y) const;
    Vector q_apply_transposed(Vector y) const;

    /// Maps null-space coordinates z (length null_dim) to a full vector B z.
    Vector null_to_full(std::span<const double> z) const;
    /// Projects a full vector onto null-space coordinates: B^T v.
    Vector full_to_null(std::span<const double> v) const;

    /// Minimum-norm p with c p = rhs; throws Infeasible when inconsistent.
    Vector min_norm_solve(std::span<const double> rhs) const;

    /// Materializes the orthonormal basis as an n x null_dim matrix.
    Matrix basis_matrix() const;

private:
    std::size_t n_ = 0;
    std::size_t r_ = 0;
    std::size_t rank_ = 0;
    Matrix reflectors_;       // n x r, reflector j stored in column j
    Vector taus_;
    Matrix r_factor_;         // r x r upper triangular
    std::vector<std::size_t> perm_;  // row permutation of c from column pivoting
};

/// Orthonormal basis of the null space of `c`; throws RankDeficient when
/// `c` lacks full row rank. The result B satisfies c B = 0 and B^T B = I.
Matrix nullspace_basis(const Matrix& c);

/// Minimum-norm solution of c p = rhs (consistent systems only).
Vector min_norm_solution(const Matrix& c, std::span<const double> rhs);

}  // namespace linalg
}  // namespace lqdepth

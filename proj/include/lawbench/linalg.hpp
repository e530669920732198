#pragma once

// Dense row-major matrices and the handful of factorizations the library
// needs. Inner loops go through lawbench::simd so every routine here runs on
// either kernel backend.

#include <cstddef>
#include <vector>

namespace lawbench {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
/// A * B^T, the natural product for row-major data (both operands row-read).
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix matmul(const Matrix& a, const Matrix& b);
/// A A^T, computed on the lower triangle and mirrored so it is exactly symmetric.
Matrix gram_rows(const Matrix& a);
Vector matvec(const Matrix& a, const Vector& x);
/// A^T x
Vector matvec_t(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double frobenius_norm(const Matrix& a);
void symmetrize(Matrix& a);
bool all_finite(const Matrix& a);

/// In-place lower Cholesky factor; returns false if a pivot is not positive.
bool cholesky_inplace(Matrix& a);
Vector cholesky_solve(const Matrix& l, const Vector& b);

struct EigenResult {
    Vector values;  // descending
    Matrix vectors;  // column j pairs with values[j]; empty unless requested
    int sweeps = 0;
};

/// Cyclic Jacobi. Converged when the off-diagonal Frobenius norm drops below
/// tol * ||A||_F; throws NumericFailure after max_sweeps.
EigenResult jacobi_eigen(const Matrix& a, bool want_vectors, double tol = 1e-12, int max_sweeps = 100);

/// Householder tridiagonalization + implicit QL. Eigenvalues only, descending.
Vector tridiagonal_eigenvalues(const Matrix& a);

struct SpdSolve {
    Vector x;
    double jitter = 0.0;     // absolute shift added to the diagonal
    bool pseudo_inverse = false;
    std::size_t rank = 0;    // pseudo-inverse path only
};

/// Solves (A + shift I) x = b. Tries Cholesky, escalates jitter to 1e-12 and
/// then 1e-10 times lambda_max, and finally falls back to an eigendecomposition
/// pseudo-inverse that drops eigenvalues below pinv_rel * lambda_max.
SpdSolve solve_spd(const Matrix& a, double shift, const Vector& b, double pinv_rel = 1e-10);

}  // namespace lawbench

#include "lawbench/linalg.hpp"

#include "lawbench/error.hpp"
#include "lawbench/simd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace lawbench {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "matmul_nt: inner dimension mismatch");
    const std::size_t n = a.cols();
    Matrix c(a.rows(), b.rows());
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        std::size_t j = 0;
        for (; j + 4 <= b.rows(); j += 4) {
            // dot4 shares the left operand across four right rows here, so the
            // roles are swapped: the four "a" rows are rows of b.
            k.dot4(b.row(j), b.row(j + 1), b.row(j + 2), b.row(j + 3), ai, n, ci + j);
        }
        for (; j < b.rows(); ++j) ci[j] = k.dot(b.row(j), ai, n);
    }
    return c;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimension mismatch");
    Matrix c(a.rows(), b.cols());
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row(i);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double s = a(i, l);
            if (s != 0.0) k.axpy(s, b.row(l), ci, b.cols());
        }
    }
    return c;
}

Matrix gram_rows(const Matrix& a) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    Matrix g(n, n);
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < n; ++i) {
        const double* ai = a.row(i);
        std::size_t j = 0;
        double out[4];
        for (; j + 4 <= i + 1; j += 4) {
            k.dot4(a.row(j), a.row(j + 1), a.row(j + 2), a.row(j + 3), ai, m, out);
            for (int r = 0; r < 4; ++r) g(i, j + r) = out[r];
        }
        for (; j <= i; ++j) g(i, j) = k.dot(a.row(j), ai, m);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i);
    return g;
}

Vector matvec(const Matrix& a, const Vector& x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = simd::dot(a.row(i), x.data(), x.size());
    return y;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
    require(a.rows() == x.size(), "matvec_t: dimension mismatch");
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (x[i] != 0.0) simd::axpy(x[i], a.row(i), y.data(), a.cols());
    return y;
}

double dot(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), "dot: dimension mismatch");
    return simd::dot(a.data(), b.data(), a.size());
}

double norm2(const Vector& a) { return std::sqrt(simd::sum_squares(a.data(), a.size())); }

double frobenius_norm(const Matrix& a) {
    return std::sqrt(simd::sum_squares(a.data(), a.rows() * a.cols()));
}

void symmetrize(Matrix& a) {
    require(a.rows() == a.cols(), "symmetrize: matrix not square");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = m;
            a(j, i) = m;
        }
}

bool all_finite(const Matrix& a) {
    const double* p = a.data();
    for (std::size_t i = 0, e = a.rows() * a.cols(); i < e; ++i)
        if (!std::isfinite(p[i])) return false;
    return true;
}

bool cholesky_inplace(Matrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double* lj = a.row(j);
        const double diag = lj[j] - simd::sum_squares(lj, j);
        if (!(diag > 0.0) || !std::isfinite(diag)) return false;
        const double ljj = std::sqrt(diag);
        lj[j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double* li = a.row(i);
            li[j] = (li[j] - simd::dot(li, lj, j)) / ljj;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
    return true;
}

Vector cholesky_solve(const Matrix& l, const Vector& b) {
    const std::size_t n = l.rows();
    Vector z(b);
    for (std::size_t i = 0; i < n; ++i) z[i] = (z[i] - simd::dot(l.row(i), z.data(), i)) / l(i, i);
    // Back substitution with L^T, column-oriented so rows of L are read contiguously.
    for (std::size_t ii = n; ii-- > 0;) {
        z[ii] /= l(ii, ii);
        simd::axpy(-z[ii], l.row(ii), z.data(), ii);
    }
    return z;
}

EigenResult jacobi_eigen(const Matrix& input, bool want_vectors, double tol, int max_sweeps) {
    require(input.rows() == input.cols(), "jacobi_eigen: matrix not square");
    if (!all_finite(input)) fail(ErrorKind::InvalidArgument, "jacobi_eigen: non-finite entries");
    const std::size_t n = input.rows();
    Matrix a = input;
    symmetrize(a);
    // Vt holds the eigenvectors as rows so each rotation is a contiguous row op.
    Matrix vt = want_vectors ? Matrix::identity(n) : Matrix();
    const double fro = frobenius_norm(a);
    const auto& k = simd::kernels();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += 2.0 * k.sum_squares(a.row(i), i);
        return std::sqrt(s);
    };

    EigenResult res;
    int sweep = 0;
    while (n > 1 && fro > 0.0 && off_norm() > tol * fro) {
        if (sweep >= max_sweeps) fail(ErrorKind::NumericFailure, "jacobi_eigen: no convergence");
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                k.rot(a.row(p), a.row(q), c, s, n);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                const double* rp = a.row(p);
                const double* rq = a.row(q);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    a(r, p) = rp[r];
                    a(r, q) = rq[r];
                }
                if (want_vectors) k.rot(vt.row(p), vt.row(q), c, s, n);
            }
        }
    }
    res.sweeps = sweep;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    res.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.values[i] = a(order[i], order[i]);
    if (want_vectors) {
        res.vectors = Matrix(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            const double* v = vt.row(order[j]);
            for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v[i];
        }
    }
    return res;
}

namespace {

// Householder reduction of the symmetric matrix in place; returns the
// diagonal d and the subdiagonal e (e[0] unused).
void tridiagonalize(Matrix& a, Vector& d, Vector& e) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    Vector v(n), p(n), w(n);
    const auto& k = simd::kernels();
    for (std::size_t col = 0; col + 2 < n; ++col) {
        const std::size_t m = n - col - 1;  // length of the reflected block
        const std::size_t off = col + 1;
        for (std::size_t i = 0; i < m; ++i) v[i] = a(off + i, col);
        const double alpha_norm = std::sqrt(k.sum_squares(v.data(), m));
        d[col] = a(col, col);
        if (alpha_norm == 0.0) {
            e[col + 1] = 0.0;
            continue;
        }
        const double alpha = v[0] > 0 ? -alpha_norm : alpha_norm;
        e[col + 1] = alpha;
        v[0] -= alpha;
        const double vnorm2 = k.sum_squares(v.data(), m);
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // p = beta * A22 v, using the symmetric trailing block rows.
        for (std::size_t i = 0; i < m; ++i) p[i] = beta * k.dot(a.row(off + i) + off, v.data(), m);
        const double kcoef = 0.5 * beta * k.dot(p.data(), v.data(), m);
        for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - kcoef * v[i];
        // A22 -= v w^T + w v^T
        for (std::size_t i = 0; i < m; ++i) {
            double* ri = a.row(off + i) + off;
            k.axpy(-v[i], w.data(), ri, m);
            k.axpy(-w[i], v.data(), ri, m);
        }
    }
    if (n >= 2) {
        d[n - 2] = a(n - 2, n - 2);
        e[n - 1] = a(n - 1, n - 2);
    }
    if (n >= 1) d[n - 1] = a(n - 1, n - 1);
}

// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
void tridiagonal_ql(Vector& d, Vector& e) {
    const std::size_t n = d.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) fail(ErrorKind::NumericFailure, "tridiagonal QL: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool deflated = false;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (deflated) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

Vector tridiagonal_eigenvalues(const Matrix& input) {
    require(input.rows() == input.cols(), "tridiagonal_eigenvalues: matrix not square");
    if (!all_finite(input)) fail(ErrorKind::InvalidArgument, "tridiagonal_eigenvalues: non-finite entries");
    Matrix a = input;
    symmetrize(a);
    Vector d, e;
    tridiagonalize(a, d, e);
    tridiagonal_ql(d, e);
    std::sort(d.begin(), d.end(), std::greater<double>());
    return d;
}

SpdSolve solve_spd(const Matrix& a, double shift, const Vector& b, double pinv_rel) {
    require(a.rows() == a.cols() && a.rows() == b.size(), "solve_spd: dimension mismatch");
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a(i, i)));
    SpdSolve out;
    const double jitters[] = {0.0, 1e-12 * scale, 1e-10 * scale};
    for (int attempt = 0; attempt < 3; ++attempt) {
        const double jit = jitters[attempt];
        if (attempt > 0 && jit == 0.0) continue;
        Matrix l = a;
        for (std::size_t i = 0; i < n; ++i) l(i, i) += shift + jit;
        if (cholesky_inplace(l)) {
            // Rounding can leave an exactly singular matrix with pivots of
            // order eps instead of a failure; treat those as singular too.
            if (attempt == 0 && n > 1) {
                double min_pivot = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < n; ++i) min_pivot = std::min(min_pivot, l(i, i) * l(i, i));
                if (min_pivot <= 1e-14 * (scale + shift)) continue;
            }
            out.x = cholesky_solve(l, b);
            out.jitter = jit;
            out.rank = n;
            return out;
        }
    }
    EigenResult eig = jacobi_eigen(a, true);
    const double lmax = eig.values.empty() ? 0.0 : eig.values.front() + shift;
    if (!(lmax > 0.0)) fail(ErrorKind::SingularKernel, "solve_spd: largest eigenvalue is not positive");
    out.pseudo_inverse = true;
    out.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double lam = eig.values[j] + shift;
        if (lam <= pinv_rel * lmax) continue;
        ++out.rank;
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += eig.vectors(i, j) * b[i];
        proj /= lam;
        for (std::size_t i = 0; i < n; ++i) out.x[i] += proj * eig.vectors(i, j);
    }
    return out;
}

}  // namespace lawbench

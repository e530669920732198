#include "lawbench/simd.hpp"

namespace lawbench::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    // Four partial sums; the AVX2 path uses the same lane split so the two
    // agree closely even on long vectors.
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

void dot4_scalar(const double* a0, const double* a1, const double* a2, const double* a3,
                 const double* b, std::size_t n, double* out) {
    out[0] = dot_scalar(a0, b, n);
    out[1] = dot_scalar(a1, b, n);
    out[2] = dot_scalar(a2, b, n);
    out[3] = dot_scalar(a3, b, n);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void rot_scalar(double* x, double* y, double c, double s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

double sum_squares_scalar(const double* x, std::size_t n) { return dot_scalar(x, x, n); }

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{dot_scalar, dot4_scalar, axpy_scalar,
                                   scale_scalar, rot_scalar, sum_squares_scalar};
    return table;
}

}  // namespace lawbench::simd

#pragma once

// Data-parallel inner loops used by the dense linear algebra. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// active table is chosen once at startup from CPUID; LAWBENCH_SIMD=scalar in
// the environment forces the reference path.

#include <cstddef>
#include <string_view>

namespace lawbench::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// out[r] = dot(a_r, b) for four rows sharing one right-hand side.
    void (*dot4)(const double* a0, const double* a1, const double* a2, const double* a3,
                 const double* b, std::size_t n, double* out);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scale)(double alpha, double* x, std::size_t n);
    /// Plane rotation: (x, y) <- (c x - s y, s x + c y).
    void (*rot)(double* x, double* y, double c, double s, std::size_t n);
    double (*sum_squares)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
/// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2();
Backend active_backend();
std::string_view backend_name(Backend b);
/// Forces a backend for the rest of the process; returns false if unavailable.
bool set_backend(Backend b);

const KernelTable& kernels();

inline double dot(const double* a, const double* b, std::size_t n) { return kernels().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { kernels().axpy(alpha, x, y, n); }
inline void scale(double alpha, double* x, std::size_t n) { kernels().scale(alpha, x, n); }
inline void rot(double* x, double* y, double c, double s, std::size_t n) { kernels().rot(x, y, c, s, n); }
inline double sum_squares(const double* x, std::size_t n) { return kernels().sum_squares(x, n); }

}  // namespace lawbench::simd

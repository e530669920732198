#pragma once

#include "lawbench/linalg.hpp"
#include "lawbench/rng.hpp"

#include <cstddef>

namespace lawbench {

/// n points on the unit sphere S^{d-1}, one per row.
struct SphereSample {
    Matrix points;

    std::size_t dim() const { return points.cols(); }
    std::size_t count() const { return points.rows(); }
    const double* row(std::size_t i) const { return points.row(i); }
};

/// Standard Gaussian rows normalized to unit length.
SphereSample sample_sphere(std::size_t d, std::size_t n, RngSeed seed);
SphereSample sample_sphere(std::size_t d, std::size_t n, Rng& rng);
/// One uniform point, drawn from an existing stream.
Vector sample_sphere_point(std::size_t d, Rng& rng);

/// g - (x^T g) x
Vector project_tangent(const Vector& x, const Vector& g);

/// E[(x^T u)^p (x^T v)^q] for x uniform on S^{d-1} and s = u^T v.
double moment_cpq(int p, int q, int d, double s);

double log_gamma(double x);

}  // namespace lawbench

#include "lawbench/sphere.hpp"

#include "lawbench/error.hpp"
#include "lawbench/simd.hpp"

#include <algorithm>
#include <cmath>

namespace lawbench {

namespace {

void fill_unit_row(double* row, std::size_t d, Rng& rng) {
    for (;;) {
        for (std::size_t j = 0; j < d; ++j) row[j] = rng.normal();
        const double nrm = std::sqrt(simd::sum_squares(row, d));
        if (nrm > 0.0) {
            const double inv = 1.0 / nrm;
            for (std::size_t j = 0; j < d; ++j) row[j] *= inv;
            return;
        }
    }
}

}  // namespace

SphereSample sample_sphere(std::size_t d, std::size_t n, Rng& rng) {
    require(d >= 2, "sample_sphere: dimension must be at least 2");
    require(n >= 1, "sample_sphere: count must be positive");
    SphereSample s{Matrix(n, d)};
    for (std::size_t i = 0; i < n; ++i) fill_unit_row(s.points.row(i), d, rng);
    return s;
}

SphereSample sample_sphere(std::size_t d, std::size_t n, RngSeed seed) {
    Rng rng(seed);
    return sample_sphere(d, n, rng);
}

Vector sample_sphere_point(std::size_t d, Rng& rng) {
    require(d >= 2, "sample_sphere_point: dimension must be at least 2");
    Vector x(d);
    fill_unit_row(x.data(), d, rng);
    return x;
}

Vector project_tangent(const Vector& x, const Vector& g) {
    require(x.size() == g.size(), "project_tangent: dimension mismatch");
    const double xg = dot(x, g);
    Vector out(g);
    simd::axpy(-xg, x.data(), out.data(), out.size());
    return out;
}

double log_gamma(double x) {
    require(x > 0.0, "log_gamma: argument must be positive");
    return std::lgamma(x);
}

double moment_cpq(int p, int q, int d, double s) {
    require(p >= 0 && q >= 0, "moment_cpq: orders must be nonnegative");
    require(d >= 1, "moment_cpq: dimension must be positive");
    require(std::fabs(s) <= 1.0, "moment_cpq: |s| must not exceed 1");
    if ((p + q) % 2 != 0) return 0.0;
    const double dd = d;
    const double log_pref = std::lgamma(p + 1.0) + std::lgamma(q + 1.0) + std::lgamma(dd / 2.0) -
                            (p + q) * std::log(2.0) - std::lgamma((dd + p + q) / 2.0);
    double sum = 0.0;
    for (int t = p % 2; t <= std::min(p, q); t += 2) {
        const double log_term = t * std::log(2.0) - std::lgamma(t + 1.0) -
                                std::lgamma((p - t) / 2 + 1.0) - std::lgamma((q - t) / 2 + 1.0);
        sum += std::exp(log_term) * std::pow(s, t);
    }
    return std::exp(log_pref) * sum;
}

}  // namespace lawbench

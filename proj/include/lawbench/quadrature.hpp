#pragma once

#include "lawbench/linalg.hpp"

#include <functional>
#include <vector>

namespace lawbench {

struct QuadratureRule {
    Vector nodes;
    Vector weights;
};

/// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(int order);
/// Gauss rule for the standard normal density on the real line; weights sum to 1.
QuadratureRule gauss_hermite(int order);
/// Gauss rule for the standard normal density restricted to [0, inf); weights
/// sum to 1/2. Used for kinked integrands: E g(z) = sum w_i (g(z_i) + g(-z_i)).
QuadratureRule gauss_hermite_half(int order);

/// Gauss rule from a three-term recurrence (Golub-Welsch). alpha has n
/// entries, beta has n entries with beta[0] the total mass.
QuadratureRule golub_welsch(const Vector& alpha, const Vector& beta);

struct IntegrateOptions {
    int order = 16;          // Gauss-Legendre points per panel
    int panels = 128;        // initial panels over [a, b]
    double tol = 1e-10;      // absolute change between successive doublings
    int max_doublings = 8;
};

/// Composite Gauss-Legendre over [a, b] split at the given breakpoints;
/// panels double until successive estimates agree to tol. Throws
/// NumericFailure if they never do.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breakpoints = {}, const IntegrateOptions& opt = {});

}  // namespace lawbench

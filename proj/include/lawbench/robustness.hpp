#pragma once

#include "lawbench/model.hpp"
#include "lawbench/rng.hpp"

#include <optional>

namespace lawbench {

enum class SobolevMethod { Analytic, ExactLinear, MonteCarlo };

/// Sobolev seminorm: the L2 norm of the spherical gradient under the uniform law.
struct SobolevEstimate {
    double value = 0.0;
    SobolevMethod method = SobolevMethod::Analytic;
    std::size_t samples = 0;    // Monte Carlo only
    double std_error = 0.0;     // standard error of value^2, Monte Carlo only
};

/// sqrt(v^T C(W) v) with C(W)_{jl} = kappa_tilde(w_j . w_l). Accepts two-layer
/// models and frozen random-feature models with unit-norm hidden rows.
SobolevEstimate sobolev_analytic(const FittedModel& m, double d);
SobolevEstimate sobolev_analytic(const TwoLayerModel& m, double d);
/// ||w|| sqrt(1 - 1/d)
SobolevEstimate sobolev_exact_linear(const Vector& w, double d);
SobolevEstimate sobolev_monte_carlo(const FittedModel& m, std::size_t samples, RngSeed seed);

struct PoincareEstimate {
    double value = 0.0;      // (d - 1) Var(f)
    double std_error = 0.0;  // standard error of value
};

PoincareEstimate poincare_estimate(const FittedModel& m, std::size_t samples, RngSeed seed);
double poincare_lower_bound(const FittedModel& m, std::size_t samples, RngSeed seed);

struct RobustnessProxies {
    std::optional<double> eta;        // sum_j |v_j| ||w_j||
    std::optional<double> rkhs_norm;  // sqrt(c^T K c)
    std::optional<double> w_norm;
};

/// Kernel models need their training gram.
RobustnessProxies proxies(const FittedModel& m, const Matrix* gram = nullptr);

}  // namespace lawbench

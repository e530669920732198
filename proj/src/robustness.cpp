#include "lawbench/robustness.hpp"

#include "lawbench/error.hpp"
#include "lawbench/interpolators.hpp"
#include "lawbench/simd.hpp"
#include "lawbench/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace lawbench {

SobolevEstimate sobolev_analytic(const TwoLayerModel& m, double d) {
    const auto p = homogeneity_order(m.activation);
    if (!p || *p != 1.0)
        fail(ErrorKind::UnsupportedActivation, "sobolev_analytic: needs an activation homogeneous of order 1");
    for (std::size_t j = 0; j < m.W.rows(); ++j) {
        const double nrm = std::sqrt(simd::sum_squares(m.W.row(j), m.W.cols()));
        require(std::fabs(nrm - 1.0) <= 1e-9, "sobolev_analytic: hidden rows must have unit norm");
    }
    const Matrix c = c_sigma_sobolev(HiddenWeights{m.W, true}, m.activation, d);
    const double q = dot(m.v, matvec(c, m.v));
    if (q < -1e-10) fail(ErrorKind::NumericFailure, "sobolev_analytic: negative quadratic form");
    SobolevEstimate e;
    e.value = std::sqrt(std::max(0.0, q));
    e.method = SobolevMethod::Analytic;
    return e;
}

SobolevEstimate sobolev_analytic(const FittedModel& m, double d) {
    if (const auto* t = std::get_if<TwoLayerModel>(&m.family)) return sobolev_analytic(*t, d);
    if (const auto* f = std::get_if<FeatureModel>(&m.family))
        if (f->map.kind == FeatureKind::FrozenRF) return sobolev_analytic(as_two_layer(*f), d);
    fail(ErrorKind::InvalidArgument, "sobolev_analytic: needs a two-layer or random-features model");
}

SobolevEstimate sobolev_exact_linear(const Vector& w, double d) {
    require(d >= 2.0, "sobolev_exact_linear: d must be at least 2");
    SobolevEstimate e;
    e.value = norm2(w) * std::sqrt(1.0 - 1.0 / d);
    e.method = SobolevMethod::ExactLinear;
    return e;
}

SobolevEstimate sobolev_monte_carlo(const FittedModel& m, std::size_t samples, RngSeed seed) {
    require(samples >= 100, "sobolev_monte_carlo: need at least 100 samples");
    const std::size_t d = m.dim();
    Rng rng(seed);
    SphereSample xs = sample_sphere(d, samples, rng);
    Matrix g = gradient_batch(m, xs.points);
    Vector sq(samples);
    bool resampled = false;
    for (std::size_t i = 0; i < samples; ++i) {
        const double* x = xs.row(i);
        double* gi = g.row(i);
        const double xg = simd::dot(x, gi, d);
        simd::axpy(-xg, x, gi, d);
        sq[i] = simd::sum_squares(gi, d);
        if (!std::isfinite(sq[i])) {
            if (resampled) fail(ErrorKind::NumericFailure, "sobolev_monte_carlo: gradient not finite after resampling");
            resampled = true;
            const Vector y = sample_sphere_point(d, rng);
            const Vector gy = project_tangent(y, model_gradient(m, y));
            sq[i] = dot(gy, gy);
            if (!std::isfinite(sq[i])) fail(ErrorKind::NumericFailure, "sobolev_monte_carlo: gradient not finite");
        }
    }
    double mean = 0.0;
    for (double v : sq) mean += v;
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (double v : sq) var += (v - mean) * (v - mean);
    var /= static_cast<double>(samples - 1);
    SobolevEstimate e;
    e.value = std::sqrt(mean);
    e.method = SobolevMethod::MonteCarlo;
    e.samples = samples;
    e.std_error = std::sqrt(var / static_cast<double>(samples));
    return e;
}

PoincareEstimate poincare_estimate(const FittedModel& m, std::size_t samples, RngSeed seed) {
    require(samples >= 1000, "poincare_lower_bound: need at least 1000 samples");
    const std::size_t d = m.dim();
    const SphereSample xs = sample_sphere(d, samples, seed);
    const Vector f = predict_batch(m, xs.points);
    const double count = static_cast<double>(samples);
    double mean = 0.0;
    for (double v : f) mean += v;
    mean /= count;
    double m2 = 0.0, m4 = 0.0;
    for (double v : f) {
        const double c = (v - mean) * (v - mean);
        m2 += c;
        m4 += c * c;
    }
    const double var = m2 / (count - 1.0);
    m4 /= count;
    const double pop_var = m2 / count;
    PoincareEstimate e;
    e.value = (static_cast<double>(d) - 1.0) * var;
    e.std_error = (static_cast<double>(d) - 1.0) * std::sqrt(std::max(0.0, m4 - pop_var * pop_var) / count);
    return e;
}

double poincare_lower_bound(const FittedModel& m, std::size_t samples, RngSeed seed) {
    return poincare_estimate(m, samples, seed).value;
}

RobustnessProxies proxies(const FittedModel& m, const Matrix* gram) {
    RobustnessProxies p;
    auto eta_of = [](const TwoLayerModel& t) {
        double eta = 0.0;
        for (std::size_t j = 0; j < t.v.size(); ++j)
            eta += std::fabs(t.v[j]) * std::sqrt(simd::sum_squares(t.W.row(j), t.W.cols()));
        return eta;
    };
    if (const auto* l = std::get_if<LinearModel>(&m.family)) {
        p.w_norm = norm2(l->w);
    } else if (const auto* t = std::get_if<TwoLayerModel>(&m.family)) {
        p.eta = eta_of(*t);
    } else if (const auto* k = std::get_if<KernelModel>(&m.family)) {
        if (gram == nullptr) fail(ErrorKind::InvalidArgument, "proxies: kernel model needs its gram matrix");
        p.rkhs_norm = rkhs_norm(k->c, *gram);
    } else if (const auto* f = std::get_if<FeatureModel>(&m.family)) {
        // ||a|| is the RKHS norm of the empirical kernel.
        p.rkhs_norm = norm2(f->a);
        if (f->map.kind == FeatureKind::FrozenRF) p.eta = eta_of(as_two_layer(*f));
    }
    return p;
}

}  // namespace lawbench

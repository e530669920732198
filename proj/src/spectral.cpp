#include "lawbench/spectral.hpp"

#include "lawbench/error.hpp"
#include "lawbench/quadrature.hpp"
#include "lawbench/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lawbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMemoryLimitBytes = 2.0e9;

Matrix profile_matrix(const HiddenWeights& w, const std::function<double(double)>& f) {
    Matrix g = gram_rows(w.W);
    const std::size_t k = g.rows();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = f(std::clamp(g(i, j), -1.0, 1.0));
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

void require_homogeneous(Activation a, const char* what) {
    if (!homogeneity_order(a))
        fail(ErrorKind::UnsupportedActivation,
             std::string(what) + ": needs a positively homogeneous activation (" +
                 std::string(activation_name(a)) + " is not)");
}

// Covariance of the rows of Z (m x D), divided by m.
Matrix row_covariance(Matrix& z, bool centered) {
    const std::size_t m = z.rows();
    const std::size_t dim = z.cols();
    if (centered) {
        Vector mean(dim, 0.0);
        for (std::size_t i = 0; i < m; ++i) simd::axpy(1.0, z.row(i), mean.data(), dim);
        for (double& v : mean) v /= static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) simd::axpy(-1.0, mean.data(), z.row(i), dim);
    }
    Matrix c = gram_rows(transpose(z));
    simd::scale(1.0 / static_cast<double>(m), c.data(), dim * dim);
    return c;
}

// Integral of g over the continuous MP part via t = a + (b - a) sin^2(th/2),
// which turns the square-root edges into a smooth integrand. The sine form
// avoids cancellation in 1 - cos th, which matters when a = 0 (gamma = 1).
double mp_continuous(double gamma, double theta_max, const std::function<double(double)>& g) {
    const double sg = std::sqrt(gamma);
    const double a = (1 - sg) * (1 - sg);
    const double b = (1 + sg) * (1 + sg);
    const double half = 0.5 * (b - a);
    auto integrand = [&](double th) {
        const double sh = std::sin(0.5 * th);
        const double t = a + 2.0 * half * sh * sh;
        const double s = std::sin(th);
        if (t <= 0.0) return 0.0;
        return half * half * s * s * g(t) / (2.0 * kPi * gamma * t);
    };
    // Rough pass to set a relative tolerance.
    const QuadratureRule gl = gauss_legendre(64);
    double rough = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        rough += gl.weights[i] * integrand(0.5 * theta_max * (gl.nodes[i] + 1.0));
    rough *= 0.5 * theta_max;
    IntegrateOptions opt;
    opt.order = 16;
    opt.panels = 16;
    opt.tol = std::max(1e-300, 1e-11 * std::fabs(rough));
    opt.max_doublings = 12;
    return integrate(integrand, 0.0, theta_max, {}, opt);
}

}  // namespace

SpectrumSummary summarize_spectrum(Vector eigenvalues) {
    std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<double>());
    SpectrumSummary s;
    s.eigenvalues = std::move(eigenvalues);
    if (!s.eigenvalues.empty()) {
        s.lambda_max = s.eigenvalues.front();
        s.lambda_min = s.eigenvalues.back();
        s.cond = s.lambda_min > 0.0 ? s.lambda_max / s.lambda_min : kInf;
    }
    return s;
}

SpectrumSummary sym_eigs(const Matrix& a, EigenMethod method) {
    require(a.rows() == a.cols(), "sym_eigs: matrix not square");
    if (!all_finite(a)) fail(ErrorKind::InvalidArgument, "sym_eigs: non-finite entries");
    if (method == EigenMethod::Tridiagonal) return summarize_spectrum(tridiagonal_eigenvalues(a));
    return summarize_spectrum(jacobi_eigen(a, false).values);
}

Matrix c_sigma_sobolev(const HiddenWeights& w, Activation a, double d) {
    return profile_matrix(w, [&](double t) { return kappa_tilde(a, d, t); });
}

Matrix c_sigma_cov(const HiddenWeights& w, Activation a, double d) {
    require_homogeneous(a, "c_sigma_cov");
    require(d >= 1.0, "c_sigma_cov: dimension must be positive");
    const double phi0 = phi_profile(a, ProfileWhich::Value, 0.0);
    return profile_matrix(w, [&](double t) { return phi_profile(a, ProfileWhich::Value, t) - phi0; });
}

Matrix c_tilde(const HiddenWeights& w, Activation a, ProfileWhich which) {
    return profile_matrix(w, [&](double t) { return phi_profile(a, which, t); });
}

Matrix c_phi_monte_carlo(const FeatureMap& map, std::size_t m, RngSeed seed, bool centered) {
    require(m >= 2, "c_phi_monte_carlo: need at least two samples");
    const std::size_t dim = map.output_dim();
    const double bytes = 8.0 * static_cast<double>(dim) * static_cast<double>(m) * 2.0 +
                         8.0 * static_cast<double>(dim) * static_cast<double>(dim);
    if (bytes > kMemoryLimitBytes) fail(ErrorKind::ResourceLimit, "c_phi_monte_carlo: feature matrix too large");
    const std::size_t d = map.weights.dim();
    const SphereSample xs = sample_sphere(d, m, seed);
    Matrix z = feature_matrix(map, xs.points);
    simd::scale(std::sqrt(static_cast<double>(d)), z.data(), m * dim);
    return row_covariance(z, centered);
}

LinearizationCoeffs linearization_cov(Activation a, double d) {
    const double p0 = phi_profile(a, ProfileWhich::Value, 0.0);
    const double p1 = phi_profile(a, ProfileWhich::Value, 1.0);
    const double dp0 = phi_profile(a, ProfileWhich::Derivative, 0.0);
    const double ddp0 = phi_profile_deriv2(a, 0.0);
    return {0.0, dp0, p1 - p0 - dp0, ddp0 / (2.0 * d)};
}

LinearizationCoeffs linearization_uncentered(Activation a, double d) {
    LinearizationCoeffs c = linearization_cov(a, d);
    c.beta1_const = phi_profile(a, ProfileWhich::Value, 0.0);
    return c;
}

LinearizationCoeffs linearization_kappa_tilde(Activation a, double d) {
    const MaclaurinCoeffs m = maclaurin_at_zero([&](double t) { return kappa_tilde(a, d, t); });
    const double inv_d = std::isinf(d) ? 0.0 : 1.0 / d;
    return {m.a0, m.a1, kappa_tilde(a, d, 1.0) - m.a0 - m.a1, m.a2 * inv_d};
}

Matrix linearized_c(const HiddenWeights& w, const LinearizationCoeffs& c) {
    Matrix g = gram_rows(w.W);
    const std::size_t k = g.rows();
    const double cst = c.beta1_const + c.correction;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) g(i, j) = cst + c.beta2_lin * g(i, j) + (i == j ? c.beta3_diag : 0.0);
    return g;
}

double op_distance(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "op_distance: shape mismatch");
    Matrix diff = a;
    simd::axpy(-1.0, b.data(), diff.data(), a.rows() * a.cols());
    const SpectrumSummary s = sym_eigs(diff);
    if (s.eigenvalues.empty()) return 0.0;
    return std::max(std::fabs(s.lambda_max), std::fabs(s.lambda_min));
}

double condition_alpha_sigma(const HiddenWeights& w, Activation a, double d) {
    const SpectrumSummary c = sym_eigs(c_sigma_cov(w, a, d));
    if (!(c.lambda_min > 1e-12)) fail(ErrorKind::SingularKernel, "condition_alpha_sigma: C_sigma(W) is singular");
    const SpectrumSummary ww = sym_eigs(gram_rows(w.W));
    return ww.lambda_max / c.lambda_min;
}

double condition_alpha_phi(const FeatureMap& map, std::size_t m, RngSeed seed) {
    require(m >= 2, "condition_alpha_phi: need at least two samples");
    const std::size_t d = map.weights.dim();
    const SphereSample xs = sample_sphere(d, m, seed);
    Matrix z = feature_matrix(map, xs.points);
    double energy = 0.0;
    for (std::size_t i = 0; i < m; ++i) energy += simd::sum_squares(z.row(i), z.cols());
    energy /= static_cast<double>(m);
    simd::scale(std::sqrt(static_cast<double>(d)), z.data(), m * z.cols());
    const SpectrumSummary c = sym_eigs(row_covariance(z, true), z.cols() > 200 ? EigenMethod::Tridiagonal : EigenMethod::Jacobi);
    if (!(c.lambda_min > 0.0)) fail(ErrorKind::SingularKernel, "condition_alpha_phi: C_Phi is singular");
    return energy / c.lambda_min;
}

double condition_alpha_gram(const DotProductKernel& k, const SphereSample& X, std::size_t m, RngSeed seed) {
    require(m >= 2, "condition_alpha_gram: need at least two samples");
    const std::size_t n = X.count();
    const std::size_t d = X.dim();
    const Matrix kxx = gram_dot(k, X.points, X.points);
    const SpectrumSummary top = sym_eigs(kxx, n > 200 ? EigenMethod::Tridiagonal : EigenMethod::Jacobi);
    double mean_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_diag += kxx(i, i);
    mean_diag /= static_cast<double>(n);
    const SphereSample xs = sample_sphere(d, m, seed);
    Matrix z = gram_dot(k, xs.points, X.points);  // m x n
    simd::scale(std::sqrt(static_cast<double>(d)), z.data(), m * n);
    const SpectrumSummary c = sym_eigs(row_covariance(z, true), n > 200 ? EigenMethod::Tridiagonal : EigenMethod::Jacobi);
    if (!(c.lambda_min > 0.0)) fail(ErrorKind::SingularKernel, "condition_alpha_gram: C_K(X) is singular");
    return top.lambda_max / c.lambda_min * mean_diag;
}

double mp_atom(double gamma) {
    require(gamma > 0.0, "mp_atom: gamma must be positive");
    return std::max(0.0, 1.0 - 1.0 / gamma);
}

double mp_density(double gamma, double t) {
    require(gamma > 0.0, "mp_density: gamma must be positive");
    const double sg = std::sqrt(gamma);
    const double a = (1 - sg) * (1 - sg);
    const double b = (1 + sg) * (1 + sg);
    if (t <= a || t >= b || t <= 0.0) return 0.0;
    return std::sqrt((b - t) * (t - a)) / (2.0 * kPi * gamma * t);
}

double mp_cdf(double gamma, double t) {
    require(gamma > 0.0, "mp_cdf: gamma must be positive");
    if (t < 0.0) return 0.0;
    const double sg = std::sqrt(gamma);
    const double a = (1 - sg) * (1 - sg);
    const double b = (1 + sg) * (1 + sg);
    const double atom = mp_atom(gamma);
    if (t <= a) return atom;
    if (t >= b) return 1.0;
    const double theta = 2.0 * std::asin(std::sqrt(std::clamp((t - a) / (b - a), 0.0, 1.0)));
    return atom + mp_continuous(gamma, theta, [](double) { return 1.0; });
}

double mp_integral(double gamma, double nlambda, MPIntegral which) {
    require(gamma > 0.0, "mp_integral: gamma must be positive");
    require(nlambda >= 0.0, "mp_integral: nlambda must be nonnegative");
    if (which == MPIntegral::Norm) {
        if (nlambda == 0.0 && gamma == 1.0) return kInf;
        return mp_continuous(gamma, kPi, [&](double t) { return t / ((t + nlambda) * (t + nlambda)); });
    }
    // The atom contributes 1 to the constant and 0 to both integrals.
    const double i1 = mp_continuous(gamma, kPi, [&](double t) { return t / (t + nlambda); });
    const double i2 = mp_continuous(gamma, kPi, [&](double t) {
        const double r = t / (t + nlambda);
        return r * r;
    });
    return 1.0 - 2.0 * i1 + i2;
}

double ks_distance_mp(const Vector& eigenvalues, double gamma) {
    Vector ev = eigenvalues;
    std::sort(ev.begin(), ev.end());
    const std::size_t n = ev.size();
    require(n >= 1, "ks_distance_mp: empty spectrum");
    const double top = std::max(std::fabs(ev.front()), std::fabs(ev.back()));
    for (double& x : ev)
        if (std::fabs(x) <= 1e-9 * top) x = 0.0;
    // Compare left and right limits at each distinct value; the MP law has a
    // jump at 0 that must line up with a block of zero eigenvalues.
    double dist = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && ev[j] == ev[i]) ++j;
        const double x = ev[i];
        const double right = mp_cdf(gamma, x);
        const double left = x == 0.0 ? 0.0 : right;
        dist = std::max(dist, std::fabs(right - static_cast<double>(j) / n));
        dist = std::max(dist, std::fabs(left - static_cast<double>(i) / n));
        i = j;
    }
    return dist;
}

}  // namespace lawbench

#include "lawbench/kernel.hpp"

#include "lawbench/error.hpp"
#include "lawbench/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lawbench {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_unit(double t) {
    if (!(std::fabs(t) <= 1.0 + kSlack)) fail(ErrorKind::InvalidArgument, "kernel profile: |t| exceeds 1");
    return std::clamp(t, -1.0, 1.0);
}

double raw_profile(const DotProductKernel& k, double t) {
    switch (k.kind) {
        case KernelKind::Linear: return t;
        case KernelKind::Polynomial: return std::pow(k.c + t, k.degree);
        case KernelKind::Gaussian: return std::exp(-(2.0 - 2.0 * t) / (k.s * k.s));
        case KernelKind::Laplace: return std::exp(-std::sqrt(std::max(0.0, 2.0 - 2.0 * t)) / k.s);
        case KernelKind::ExpType: return std::exp(-std::pow(std::max(0.0, 2.0 - 2.0 * t), k.beta / 2.0) / k.s);
        case KernelKind::ArcCos0: return std::acos(-t) / kPi;
        case KernelKind::ArcCos1: return (t * std::acos(-t) + std::sqrt(std::max(0.0, 1.0 - t * t))) / kPi;
        case KernelKind::RFInfinite:
            return phi_profile(k.activation, ProfileWhich::Value, t) /
                   phi_profile(k.activation, ProfileWhich::Value, 1.0);
        case KernelKind::NTKInfinite:
            return t * phi_profile(k.activation, ProfileWhich::Derivative, t) /
                   phi_profile(k.activation, ProfileWhich::Derivative, 1.0);
    }
    return 0.0;
}

}  // namespace

DotProductKernel DotProductKernel::polynomial(double c, double degree) {
    DotProductKernel k;
    k.kind = KernelKind::Polynomial;
    k.c = c;
    k.degree = degree;
    return k;
}

DotProductKernel DotProductKernel::gaussian(double s) {
    require(s > 0.0, "gaussian kernel: bandwidth must be positive");
    DotProductKernel k;
    k.kind = KernelKind::Gaussian;
    k.s = s;
    return k;
}

DotProductKernel DotProductKernel::laplace(double s) {
    require(s > 0.0, "laplace kernel: bandwidth must be positive");
    DotProductKernel k;
    k.kind = KernelKind::Laplace;
    k.s = s;
    return k;
}

DotProductKernel DotProductKernel::exp_type(double s, double beta) {
    require(s > 0.0 && beta > 0.0 && beta <= 2.0, "exp-type kernel: need s > 0 and beta in (0, 2]");
    DotProductKernel k;
    k.kind = KernelKind::ExpType;
    k.s = s;
    k.beta = beta;
    return k;
}

DotProductKernel DotProductKernel::arccos0() {
    DotProductKernel k;
    k.kind = KernelKind::ArcCos0;
    return k;
}

DotProductKernel DotProductKernel::arccos1() {
    DotProductKernel k;
    k.kind = KernelKind::ArcCos1;
    return k;
}

DotProductKernel DotProductKernel::rf_infinite(Activation a) {
    DotProductKernel k;
    k.kind = KernelKind::RFInfinite;
    k.activation = a;
    return k;
}

DotProductKernel DotProductKernel::ntk_infinite(Activation a) {
    DotProductKernel k;
    k.kind = KernelKind::NTKInfinite;
    k.activation = a;
    return k;
}

std::string DotProductKernel::describe() const {
    switch (kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Polynomial: return "polynomial";
        case KernelKind::Gaussian: return "gaussian";
        case KernelKind::Laplace: return "laplace";
        case KernelKind::ExpType: return "exp-type";
        case KernelKind::ArcCos0: return "arccos0";
        case KernelKind::ArcCos1: return "arccos1";
        case KernelKind::RFInfinite: return "rf-infinite-" + std::string(activation_name(activation));
        case KernelKind::NTKInfinite: return "ntk-infinite-" + std::string(activation_name(activation));
    }
    return "unknown";
}

double kernel_profile(const DotProductKernel& k, double t) {
    return k.scale * raw_profile(k, clamp_unit(t));
}

ProfileDerivative kernel_profile_deriv(const DotProductKernel& k, double t) {
    t = clamp_unit(t);
    const double u = std::sqrt(std::max(0.0, 1.0 - t * t));
    ProfileDerivative out;
    auto singular = [&] {
        out.value = kInf;
        out.singular = true;
        return out;
    };
    double v = 0.0;
    switch (k.kind) {
        case KernelKind::Linear: v = 1.0; break;
        case KernelKind::Polynomial: v = k.degree * std::pow(k.c + t, k.degree - 1.0); break;
        case KernelKind::Gaussian: v = (2.0 / (k.s * k.s)) * raw_profile(k, t); break;
        case KernelKind::Laplace: {
            const double r = std::sqrt(std::max(0.0, 2.0 - 2.0 * t));
            if (r == 0.0) return singular();
            v = raw_profile(k, t) / (k.s * r);
            break;
        }
        case KernelKind::ExpType: {
            const double r = std::max(0.0, 2.0 - 2.0 * t);
            if (r == 0.0 && k.beta < 2.0) return singular();
            v = (k.beta / k.s) * std::pow(r, k.beta / 2.0 - 1.0) * raw_profile(k, t);
            break;
        }
        case KernelKind::ArcCos0:
            if (u == 0.0) return singular();
            v = 1.0 / (kPi * u);
            break;
        case KernelKind::ArcCos1: v = std::acos(-t) / kPi; break;
        case KernelKind::RFInfinite:
            v = phi_profile(k.activation, ProfileWhich::Derivative, t) /
                phi_profile(k.activation, ProfileWhich::Value, 1.0);
            break;
        case KernelKind::NTKInfinite: {
            const double psi2 = phi_profile_deriv2(k.activation, t);
            if (std::isinf(psi2)) return singular();
            v = (phi_profile(k.activation, ProfileWhich::Derivative, t) + t * psi2) /
                phi_profile(k.activation, ProfileWhich::Derivative, 1.0);
            break;
        }
    }
    out.value = k.scale * v;
    return out;
}

Matrix gram_dot(const DotProductKernel& k, const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "gram_dot: dimension mismatch");
    Matrix g = (&a == &b) ? gram_rows(a) : matmul_nt(a, b);
    double* p = g.data();
    for (std::size_t i = 0, e = g.rows() * g.cols(); i < e; ++i) p[i] = kernel_profile(k, p[i]);
    return g;
}

Matrix gram_dot(const DotProductKernel& k, const SphereSample& a, const SphereSample& b) {
    return gram_dot(k, a.points, b.points);
}

HiddenWeights draw_weights(std::size_t k, std::size_t d, RngSeed seed) {
    require(k >= 1, "draw_weights: width must be positive");
    return HiddenWeights{sample_sphere(d, k, seed).points, true};
}

std::size_t FeatureMap::output_dim() const {
    return kind == FeatureKind::FrozenRF ? weights.width() : weights.width() * weights.dim();
}

Vector rf_features(const FeatureMap& map, const Vector& x) {
    require(x.size() == map.weights.dim(), "rf_features: dimension mismatch");
    const std::size_t k = map.weights.width();
    const double inv = 1.0 / std::sqrt(static_cast<double>(k));
    Vector z = matvec(map.weights.W, x);
    for (double& v : z) v = inv * eval(map.activation, v);
    return z;
}

Vector ntk_features(const FeatureMap& map, const Vector& x) {
    require(x.size() == map.weights.dim(), "ntk_features: dimension mismatch");
    const std::size_t k = map.weights.width();
    const std::size_t d = map.weights.dim();
    const double inv = 1.0 / std::sqrt(static_cast<double>(k));
    const Vector pre = matvec(map.weights.W, x);
    Vector z(k * d);
    for (std::size_t j = 0; j < k; ++j) {
        const double s = inv * deriv(map.activation, pre[j]);
        for (std::size_t i = 0; i < d; ++i) z[j * d + i] = s * x[i];
    }
    return z;
}

Vector features(const FeatureMap& map, const Vector& x) {
    return map.kind == FeatureKind::FrozenRF ? rf_features(map, x) : ntk_features(map, x);
}

Matrix feature_matrix(const FeatureMap& map, const Matrix& X) {
    require(X.cols() == map.weights.dim(), "feature_matrix: dimension mismatch");
    const std::size_t n = X.rows();
    const std::size_t k = map.weights.width();
    const std::size_t d = map.weights.dim();
    const double inv = 1.0 / std::sqrt(static_cast<double>(k));
    const Matrix pre = matmul_nt(X, map.weights.W);  // n x k
    if (map.kind == FeatureKind::FrozenRF) {
        Matrix z(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) z(i, j) = inv * eval(map.activation, pre(i, j));
        return z;
    }
    Matrix z(n, k * d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = X.row(i);
        double* zi = z.row(i);
        for (std::size_t j = 0; j < k; ++j) {
            const double s = inv * deriv(map.activation, pre(i, j));
            for (std::size_t l = 0; l < d; ++l) zi[j * d + l] = s * xi[l];
        }
    }
    return z;
}

Matrix empirical_gram(const FeatureMap& map, const Matrix& X) {
    require(X.cols() == map.weights.dim(), "empirical_gram: dimension mismatch");
    if (map.kind == FeatureKind::FrozenRF) return gram_rows(feature_matrix(map, X));
    const std::size_t n = X.rows();
    const std::size_t k = map.weights.width();
    const Matrix pre = matmul_nt(X, map.weights.W);
    Matrix s(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) s(i, j) = deriv(map.activation, pre(i, j));
    Matrix g = gram_rows(s);
    const Matrix xx = gram_rows(X);
    const double inv_k = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = xx(i, j) * g(i, j) * inv_k;
    return g;
}

Matrix empirical_gram(const FeatureMap& map, const SphereSample& X) { return empirical_gram(map, X.points); }

}  // namespace lawbench

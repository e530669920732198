#include "lawbench/activation.hpp"

#include "lawbench/error.hpp"
#include "lawbench/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace lawbench {

namespace {

constexpr double kPi = std::numbers::pi;

// Hermite expansion of tanh: tanh(g) = sum_k a_k h_k(g) with h_k the
// orthonormal (probabilists') Hermite polynomials. Only odd k are nonzero.
constexpr int kTanhTerms = 160;

const std::vector<double>& tanh_hermite_sq() {
    static const std::vector<double> coeffs = [] {
        const QuadratureRule gh = gauss_hermite(240);
        std::vector<double> a(kTanhTerms, 0.0);
        for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
            const double g = gh.nodes[i];
            const double f = std::tanh(g) * gh.weights[i];
            double hm1 = 0.0, h = 1.0;
            for (int k = 0; k < kTanhTerms; ++k) {
                a[k] += f * h;
                const double hn = (g * h - std::sqrt(static_cast<double>(k)) * hm1) / std::sqrt(k + 1.0);
                hm1 = h;
                h = hn;
            }
        }
        for (double& x : a) x *= x;
        return a;
    }();
    return coeffs;
}

// r-th derivative of sum_k c_k t^k.
double tanh_series(double t, int r) {
    const auto& c = tanh_hermite_sq();
    double acc = 0.0;
    for (int k = kTanhTerms - 1; k >= r; --k) {
        double f = 1.0;
        for (int j = 0; j < r; ++j) f *= (k - j);
        acc = acc * t + c[k] * f;
    }
    return acc;
}

void check_unit(double t, const char* what) {
    if (!(std::fabs(t) <= 1.0)) fail(ErrorKind::InvalidArgument, std::string(what) + ": |t| must not exceed 1");
}

}  // namespace

std::string_view activation_name(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Abs: return "abs";
        case Activation::Erf: return "erf";
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    return "unknown";
}

Activation parse_activation(std::string_view name) {
    if (name == "relu" || name == "ReLU") return Activation::ReLU;
    if (name == "abs" || name == "Abs") return Activation::Abs;
    if (name == "erf" || name == "Erf") return Activation::Erf;
    if (name == "tanh" || name == "Tanh") return Activation::Tanh;
    if (name == "identity" || name == "Identity") return Activation::Identity;
    fail(ErrorKind::UnsupportedActivation, "unknown activation: " + std::string(name));
}

std::optional<double> homogeneity_order(Activation a) {
    switch (a) {
        case Activation::ReLU:
        case Activation::Abs:
        case Activation::Identity: return 1.0;
        default: return std::nullopt;
    }
}

double eval(Activation a, double t) {
    switch (a) {
        case Activation::ReLU: return t > 0.0 ? t : 0.0;
        case Activation::Abs: return std::fabs(t);
        case Activation::Erf: return std::erf(t / std::numbers::sqrt2);
        case Activation::Tanh: return std::tanh(t);
        case Activation::Identity: return t;
    }
    return 0.0;
}

double deriv(Activation a, double t) {
    switch (a) {
        case Activation::ReLU: return t > 0.0 ? 1.0 : 0.0;
        case Activation::Abs: return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
        case Activation::Erf: return std::sqrt(2.0 / kPi) * std::exp(-0.5 * t * t);
        case Activation::Tanh: {
            const double th = std::tanh(t);
            return 1.0 - th * th;
        }
        case Activation::Identity: return 1.0;
    }
    return 0.0;
}

double deriv2(Activation a, double t) {
    switch (a) {
        case Activation::Erf: return -t * deriv(a, t);
        case Activation::Tanh: {
            const double th = std::tanh(t);
            return -2.0 * th * (1.0 - th * th);
        }
        default: return 0.0;
    }
}

CurvatureCoeffs curvature_coeffs(Activation a, int quad_order) {
    require(quad_order >= 40, "curvature_coeffs: quad_order must be at least 40");
    const QuadratureRule rule = gauss_hermite_half(quad_order);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double z = rule.nodes[i];
        const double w = rule.weights[i];
        const double sp = eval(a, z);
        const double sm = eval(a, -z);
        m0 += w * (sp + sm);
        m1 += w * z * (sp - sm);
        m2 += w * (sp * sp + sm * sm);
    }
    CurvatureCoeffs c;
    c.beta0 = m0 * m0;
    c.beta1 = m1 * m1;
    c.beta_star = m2 - c.beta0 - c.beta1;
    return c;
}

double induced_kappa_quadrature(const std::function<double(double)>& h, double p, int d, double t) {
    check_unit(t, "induced_kappa_quadrature");
    require(d >= 2, "induced_kappa_quadrature: dimension must be at least 2");
    require(p >= 0.0, "induced_kappa_quadrature: homogeneity order must be nonnegative");
    // C_{d,q} = 2^{q/2-1} d Gamma((d+q)/2) / Gamma((d+2)/2), evaluated in log space.
    auto log_c = [](double dd, double q) {
        return (q / 2.0 - 1.0) * std::log(2.0) + std::log(dd) + std::lgamma((dd + q) / 2.0) -
               std::lgamma((dd + 2.0) / 2.0);
    };
    const double pref = std::exp(log_c(2.0, 2.0 * p) - log_c(d, 2.0 * p)) / (2.0 * kPi);
    const double theta = std::acos(t);
    auto integrand = [&](double u) { return h(std::cos(u)) * h(std::cos(u - theta)); };
    // Homogeneous h is smooth away from 0, so the only kinks sit where either
    // cosine vanishes.
    std::vector<double> breaks{kPi / 2, 3 * kPi / 2};
    for (double b : {theta + kPi / 2, theta + 3 * kPi / 2}) {
        double x = std::fmod(b, 2 * kPi);
        if (x < 0) x += 2 * kPi;
        breaks.push_back(x);
    }
    IntegrateOptions opt;
    opt.order = 16;
    opt.panels = 128;
    opt.tol = 1e-10;
    return pref * integrate(integrand, 0.0, 2 * kPi, breaks, opt);
}

double kappa_tilde(Activation a, double d, double t) {
    check_unit(t, "kappa_tilde");
    require(d >= 1.0, "kappa_tilde: dimension must be at least 1");
    const double inv_d = std::isinf(d) ? 0.0 : 1.0 / d;
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    switch (a) {
        case Activation::ReLU: {
            const double ac = std::acos(-t);
            return t * ac / (2 * kPi) - (t * ac + s) * inv_d / (2 * kPi);
        }
        case Activation::Abs: {
            const double as = std::asin(t);
            return 2 * t * as / kPi - (2 * t * as + 2 * s) * inv_d / kPi;
        }
        case Activation::Identity: return t - t * inv_d;
        case Activation::Erf:
            return t * (2.0 / kPi) / std::sqrt(4.0 - t * t) - (2.0 / kPi) * inv_d * std::asin(t / 2.0);
        case Activation::Tanh: break;
    }
    fail(ErrorKind::UnsupportedActivation, "kappa_tilde: tanh has neither homogeneity nor a closed form");
}

double phi_profile(Activation a, ProfileWhich which, double t) {
    check_unit(t, "phi_profile");
    const bool value = which == ProfileWhich::Value;
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    switch (a) {
        case Activation::ReLU:
            return value ? (t * std::acos(-t) + s) / (2 * kPi) : std::acos(-t) / (2 * kPi);
        case Activation::Abs:
            return value ? (2.0 / kPi) * (t * std::asin(t) + s) : (2.0 / kPi) * std::asin(t);
        case Activation::Identity: return value ? t : 1.0;
        case Activation::Erf:
            return value ? (2.0 / kPi) * std::asin(t / 2.0) : (2.0 / kPi) / std::sqrt(4.0 - t * t);
        case Activation::Tanh: return tanh_series(t, value ? 0 : 1);
    }
    return 0.0;
}

double phi_profile_deriv2(Activation a, double t) {
    check_unit(t, "phi_profile_deriv2");
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    switch (a) {
        case Activation::ReLU:
            return s > 0.0 ? 1.0 / (2 * kPi * s) : std::numeric_limits<double>::infinity();
        case Activation::Abs:
            return s > 0.0 ? (2.0 / kPi) / s : std::numeric_limits<double>::infinity();
        case Activation::Identity: return 0.0;
        case Activation::Erf: return (2.0 / kPi) * t * std::pow(4.0 - t * t, -1.5);
        case Activation::Tanh: return tanh_series(t, 2);
    }
    return 0.0;
}

MaclaurinCoeffs maclaurin_at_zero(const std::function<double(double)>& f, double h0) {
    require(h0 > 0.0, "maclaurin_at_zero: step must be positive");
    constexpr int levels = 5;
    std::array<std::array<double, levels>, 3> table{};  // [derivative order - 1][level]
    const double f0 = f(0.0);
    for (int i = 0; i < levels; ++i) {
        const double h = h0 / std::pow(2.0, i);
        const double fp = f(h), fm = f(-h), f2p = f(2 * h), f2m = f(-2 * h);
        table[0][i] = (fp - fm) / (2 * h);
        table[1][i] = (fp - 2 * f0 + fm) / (h * h);
        table[2][i] = (f2p - 2 * fp + 2 * fm - f2m) / (2 * h * h * h);
    }
    double deriv_est[3];
    for (int r = 0; r < 3; ++r) {
        std::array<double, levels> col = table[r];
        for (int j = 1; j < levels; ++j) {
            const double factor = std::pow(4.0, j) - 1.0;
            for (int i = levels - 1; i >= j; --i) col[i] = col[i] + (col[i] - col[i - 1]) / factor;
        }
        deriv_est[r] = col[levels - 1];
    }
    MaclaurinCoeffs m{f0, deriv_est[0], deriv_est[1] / 2.0, deriv_est[2] / 6.0};
    if (!std::isfinite(m.a0) || !std::isfinite(m.a1) || !std::isfinite(m.a2) || !std::isfinite(m.a3))
        fail(ErrorKind::NumericFailure, "maclaurin_at_zero: non-finite value in stencil");
    return m;
}

}  // namespace lawbench

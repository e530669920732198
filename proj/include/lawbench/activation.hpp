#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace lawbench {

enum class Activation { ReLU, Abs, Erf, Tanh, Identity };

/// Erf is the unit-slope normalization erf(t / sqrt 2), which keeps it 1-Lipschitz.
std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);
/// Order p of positive homogeneity; empty for Erf and Tanh.
std::optional<double> homogeneity_order(Activation a);

double eval(Activation a, double t);
/// Almost-everywhere derivative; 0 at the ReLU/Abs kink.
double deriv(Activation a, double t);
/// Second derivative; 0 for the piecewise-linear kinds.
double deriv2(Activation a, double t);

struct CurvatureCoeffs {
    double beta0 = 0.0;  // E[s(z)]^2
    double beta1 = 0.0;  // E[z s(z)]^2
    double beta_star = 0.0;
};

CurvatureCoeffs curvature_coeffs(Activation a, int quad_order = 80);

/// Catalan-type integral for a positively homogeneous h of order p:
/// E_x[h(x.u) h(x.v)] for x uniform on S^{d-1} and t = u.v.
double induced_kappa_quadrature(const std::function<double(double)>& h, double p, int d, double t);

/// t kappa_{s'}(t) - p kappa_s(t). Pass d = infinity for the d-free limit.
double kappa_tilde(Activation a, double d, double t);

enum class ProfileWhich { Value, Derivative };

/// Gaussian dual profile: E[s(g) s(g')] (Value) or E[s'(g) s'(g')] (Derivative)
/// for standard normals with correlation t. For the homogeneous kinds this is
/// the dimension-free profile with E_x[s(x.u)s(x.v)] = phi(u.v) / d.
/// Tanh goes through a Hermite series.
double phi_profile(Activation a, ProfileWhich which, double t);
/// d/dt of phi_profile(a, Derivative, t); infinite at the endpoints for ReLU/Abs.
double phi_profile_deriv2(Activation a, double t);

struct MaclaurinCoeffs {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
};

/// Taylor coefficients at 0 by Richardson-extrapolated central differences
/// with base step h0.
MaclaurinCoeffs maclaurin_at_zero(const std::function<double(double)>& profile, double h0 = 4e-2);

}  // namespace lawbench

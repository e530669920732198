#pragma once

#include "lawbench/activation.hpp"
#include "lawbench/kernel.hpp"
#include "lawbench/linalg.hpp"
#include "lawbench/rng.hpp"
#include "lawbench/sphere.hpp"

namespace lawbench {

struct SpectrumSummary {
    Vector eigenvalues;  // descending
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;   // +inf when lambda_min <= 0
};

enum class EigenMethod { Jacobi, Tridiagonal };

/// Symmetrizes (A + A^T) / 2 first. Jacobi is the reference; Tridiagonal is
/// the eigenvalue-only fast path for large matrices.
SpectrumSummary sym_eigs(const Matrix& a, EigenMethod method = EigenMethod::Jacobi);
SpectrumSummary summarize_spectrum(Vector eigenvalues);

/// Entries kappa_tilde(w_j . w_l) at dimension d.
Matrix c_sigma_sobolev(const HiddenWeights& w, Activation a, double d);
/// Covariance of sqrt(d) s(W x): entries phi(w_j . w_l) - phi(0). Homogeneous kinds only.
Matrix c_sigma_cov(const HiddenWeights& w, Activation a, double d);
/// Uncentered dual-profile matrix phi(W W^T) for the value or derivative profile.
Matrix c_tilde(const HiddenWeights& w, Activation a, ProfileWhich which);

/// Empirical covariance of sqrt(d) Phi(x) over m uniform samples.
Matrix c_phi_monte_carlo(const FeatureMap& map, std::size_t m, RngSeed seed, bool centered = true);

struct LinearizationCoeffs {
    double beta1_const = 0.0;  // times 1 1^T
    double beta2_lin = 0.0;    // times W W^T
    double beta3_diag = 0.0;   // times I
    double correction = 0.0;   // times 1 1^T, the phi''(0)/(2d) term
};

/// For the centered covariance c_sigma_cov:
/// (0, phi'(0), phi(1) - phi(0) - phi'(0), phi''(0)/(2d)).
LinearizationCoeffs linearization_cov(Activation a, double d);
/// For the uncentered profile matrix: (phi(0), phi'(0), phi(1) - phi(0) - phi'(0), phi''(0)/(2d)).
LinearizationCoeffs linearization_uncentered(Activation a, double d);
/// From the Maclaurin expansion of kappa_tilde at dimension d:
/// (a0, a1, kappa_tilde(1) - a0 - a1, a2/d).
LinearizationCoeffs linearization_kappa_tilde(Activation a, double d);

Matrix linearized_c(const HiddenWeights& w, const LinearizationCoeffs& c);

/// Spectral norm of A - B.
double op_distance(const Matrix& a, const Matrix& b);

/// lambda_max(W W^T) / lambda_min(c_sigma_cov(W)).
double condition_alpha_sigma(const HiddenWeights& w, Activation a, double d);
/// E||Phi(x)||^2 / lambda_min(C_Phi), both by Monte Carlo.
double condition_alpha_phi(const FeatureMap& map, std::size_t m, RngSeed seed);
/// lambda_max(K(X,X)) / lambda_min(C_K(X)) * mean_i K(x_i, x_i), with C_K(X) the
/// covariance of sqrt(d) K(X, x) over uniform x.
double condition_alpha_gram(const DotProductKernel& k, const SphereSample& X, std::size_t m, RngSeed seed);

/// Marchenko-Pastur law with ratio gamma and unit scale.
double mp_density(double gamma, double t);
/// Point mass (1 - 1/gamma)_+ at zero.
double mp_atom(double gamma);
double mp_cdf(double gamma, double t);

enum class MPIntegral { Norm, Mse };

/// Norm: int t / (t + nl)^2 dmu (the atom contributes 0).
/// Mse:  1 - 2 int t / (t + nl) dmu + int t^2 / (t + nl)^2 dmu.
/// Returns +inf for the norm integral at gamma = 1, nl = 0.
double mp_integral(double gamma, double nlambda, MPIntegral which);

/// Kolmogorov distance between an empirical spectrum and MP(gamma).
double ks_distance_mp(const Vector& eigenvalues, double gamma);

}  // namespace lawbench

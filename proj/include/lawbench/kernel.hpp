#pragma once

#include "lawbench/activation.hpp"
#include "lawbench/linalg.hpp"
#include "lawbench/rng.hpp"
#include "lawbench/sphere.hpp"

#include <string>

namespace lawbench {

enum class KernelKind { Linear, Polynomial, Gaussian, Laplace, ExpType, ArcCos0, ArcCos1, RFInfinite, NTKInfinite };

/// K(x, x') = scale * phi(x^T x') on the sphere.
/// Infinite-width RF/NTK kernels are normalized so phi(1) = 1; for ReLU they
/// are ArcCos1 and t * ArcCos0.
struct DotProductKernel {
    KernelKind kind = KernelKind::Linear;
    double c = 0.0;      // Polynomial offset
    double degree = 1;   // Polynomial exponent
    double s = 1.0;      // bandwidth for Gaussian, Laplace, ExpType
    double beta = 1.0;   // ExpType exponent
    Activation activation = Activation::ReLU;
    double scale = 1.0;

    static DotProductKernel linear() { return {}; }
    static DotProductKernel polynomial(double c, double degree);
    static DotProductKernel gaussian(double s);
    static DotProductKernel laplace(double s);
    static DotProductKernel exp_type(double s, double beta);
    static DotProductKernel arccos0();
    static DotProductKernel arccos1();
    static DotProductKernel rf_infinite(Activation a);
    static DotProductKernel ntk_infinite(Activation a);

    std::string describe() const;
};

double kernel_profile(const DotProductKernel& k, double t);

struct ProfileDerivative {
    double value = 0.0;
    bool singular = false;  // value is +-infinity at an endpoint
};

ProfileDerivative kernel_profile_deriv(const DotProductKernel& k, double t);

Matrix gram_dot(const DotProductKernel& k, const Matrix& a, const Matrix& b);
Matrix gram_dot(const DotProductKernel& k, const SphereSample& a, const SphereSample& b);

struct HiddenWeights {
    Matrix W;  // k x d
    bool row_normalized = true;

    std::size_t width() const { return W.rows(); }
    std::size_t dim() const { return W.cols(); }
};

/// k rows drawn uniformly on S^{d-1}.
HiddenWeights draw_weights(std::size_t k, std::size_t d, RngSeed seed);

enum class FeatureKind { FrozenRF, NTK };

struct FeatureMap {
    FeatureKind kind = FeatureKind::FrozenRF;
    HiddenWeights weights;
    Activation activation = Activation::ReLU;

    std::size_t output_dim() const;
};

/// (1/sqrt k) s(W x)
Vector rf_features(const FeatureMap& map, const Vector& x);
/// (1/sqrt k) s'(W x) (x) x, block j = s'(w_j . x) x
Vector ntk_features(const FeatureMap& map, const Vector& x);
Vector features(const FeatureMap& map, const Vector& x);
/// Rows are the feature vectors of the rows of X.
Matrix feature_matrix(const FeatureMap& map, const Matrix& X);
/// Z Z^T; the NTK case uses (X X^T) o (S S^T / k) without forming Z.
Matrix empirical_gram(const FeatureMap& map, const Matrix& X);
Matrix empirical_gram(const FeatureMap& map, const SphereSample& X);

}  // namespace lawbench

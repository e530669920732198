#pragma once

#include "lawbench/activation.hpp"
#include "lawbench/kernel.hpp"
#include "lawbench/linalg.hpp"

#include <string>
#include <variant>

namespace lawbench {

struct LinearModel {
    Vector w;
};

/// f(x) = sum_j v_j s(w_j . x)
struct TwoLayerModel {
    Matrix W;
    Vector v;
    Activation activation = Activation::ReLU;
};

/// f(x) = sum_i c_i K(x_i, x)
struct KernelModel {
    DotProductKernel kernel;
    Matrix anchors;
    Vector c;
};

/// f(x) = a . Phi(x)
struct FeatureModel {
    FeatureMap map;
    Vector a;
};

/// How a model was fitted; kept with the model so fallbacks are auditable.
struct FitMeta {
    double lambda = 0.0;
    double lambda_eff = 0.0;
    std::string solver = "none";  // cholesky | cholesky-jitter | pinv | ...
    double jitter = 0.0;
    bool fallback = false;
    std::size_t rank = 0;
};

struct FittedModel {
    std::variant<LinearModel, TwoLayerModel, KernelModel, FeatureModel> family;
    FitMeta meta;

    std::size_t dim() const;
    std::string family_name() const;
};

double predict(const FittedModel& m, const Vector& x);
/// One prediction per row of X.
Vector predict_batch(const FittedModel& m, const Matrix& X);

/// Euclidean gradient of the model at x. Kernel profiles are evaluated at t
/// clamped to +-(1 - 1e-9); `clamped` reports whether that happened.
Vector model_gradient(const FittedModel& m, const Vector& x, bool* clamped = nullptr);
/// Row i is the gradient at row i of X.
Matrix gradient_batch(const FittedModel& m, const Matrix& X, std::size_t* clamped = nullptr);

/// Feature-space RF models are two-layer models with v = a / sqrt k.
TwoLayerModel as_two_layer(const FeatureModel& m);

}  // namespace lawbench

#pragma once

#include "lawbench/dataset.hpp"
#include "lawbench/kernel.hpp"
#include "lawbench/model.hpp"

namespace lawbench {

/// Plain: (K + lambda I). RfScaled: (K + (k lambda / d) I), the random-features scaling.
enum class LambdaConvention { Plain, RfScaled };

struct LambdaSpec {
    double lambda = 0.0;
    LambdaConvention convention = LambdaConvention::Plain;
    std::size_t width = 0;  // k, RfScaled only

    double effective(std::size_t d) const;
};

/// c = (K(X,X) + lambda_eff I)^{-1} y; pseudo-inverse when the gram is singular.
FittedModel fit_kernel(const DotProductKernel& k, const Dataset& data, const LambdaSpec& lambda);
/// Ridge in feature space: dual when n <= feature dimension, primal otherwise.
FittedModel fit_features(const FeatureMap& map, const Dataset& data, const LambdaSpec& lambda);
/// X^T (X X^T)^{-1} y; requires n <= d.
FittedModel fit_linear_minnorm(const Dataset& data);
/// argmin (1/n)||X w - y||^2 + lambda ||w||^2, i.e. shift n lambda. lambda = 0 gives the
/// min-norm interpolant for n <= d and least squares otherwise.
FittedModel fit_linear_ridge(const Dataset& data, double lambda);

double train_mse(const FittedModel& m, const Dataset& data);
double test_mse(const FittedModel& m, const Dataset& test);

/// sqrt(c^T K c)
double rkhs_norm(const Vector& c, const Matrix& gram);

/// 1 / |1 - gamma|; +inf at gamma = 1.
double ridgeless_norm_limit(double gamma);

enum class RidgeRegime { Ridgeless, LargeRidge };
double mse_limit(double gamma, RidgeRegime regime);

/// The closed form (g - nl + 1) / (2 g sqrt((g - nl + 1)^2 + 4 nl)) - 1 / (2 g),
/// kept verbatim for comparison. It vanishes at nl = 0, unlike the limit above.
double ridge_norm_literal_form(double gamma, double nlambda);

}  // namespace lawbench

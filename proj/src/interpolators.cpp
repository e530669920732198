#include "lawbench/interpolators.hpp"

#include "lawbench/error.hpp"
#include "lawbench/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lawbench {

namespace {

void check_targets(const Dataset& data) {
    for (double v : data.y)
        if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "fit: non-finite targets");
}

FitMeta meta_from(const SpdSolve& s, double lambda, double lambda_eff) {
    FitMeta m;
    m.lambda = lambda;
    m.lambda_eff = lambda_eff;
    m.jitter = s.jitter;
    m.rank = s.rank;
    m.fallback = s.pseudo_inverse || s.jitter > 0.0;
    m.solver = s.pseudo_inverse ? "pinv" : (s.jitter > 0.0 ? "cholesky-jitter" : "cholesky");
    return m;
}

double max_diag(const Matrix& a) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.rows(); ++i) m = std::max(m, a(i, i));
    return m;
}

}  // namespace

double LambdaSpec::effective(std::size_t d) const {
    require(lambda >= 0.0, "lambda must be nonnegative");
    if (convention == LambdaConvention::Plain) return lambda;
    require(width >= 1, "rf-scaled lambda needs the width k");
    return static_cast<double>(width) * lambda / static_cast<double>(d);
}

FittedModel fit_kernel(const DotProductKernel& k, const Dataset& data, const LambdaSpec& lambda) {
    check_targets(data);
    const double lam = lambda.effective(data.d());
    const Matrix g = gram_dot(k, data.X.points, data.X.points);
    if (!all_finite(g)) fail(ErrorKind::NumericFailure, "fit_kernel: non-finite gram");
    if (!(max_diag(g) + lam > 0.0)) fail(ErrorKind::SingularKernel, "fit_kernel: gram has no positive spectrum");
    const SpdSolve s = solve_spd(g, lam, data.y);
    FittedModel m{KernelModel{k, data.X.points, s.x}, meta_from(s, lambda.lambda, lam)};
    return m;
}

FittedModel fit_features(const FeatureMap& map, const Dataset& data, const LambdaSpec& lambda) {
    check_targets(data);
    require(data.d() == map.weights.dim(), "fit_features: dimension mismatch");
    const double lam = lambda.effective(data.d());
    const std::size_t n = data.n();
    const std::size_t dim = map.output_dim();
    const Matrix z = feature_matrix(map, data.X.points);
    Vector a;
    SpdSolve s;
    if (n <= dim) {
        const Matrix g = gram_rows(z);
        if (!(max_diag(g) + lam > 0.0)) fail(ErrorKind::SingularKernel, "fit_features: empirical gram is zero");
        s = solve_spd(g, lam, data.y);
        a = matvec_t(z, s.x);
    } else {
        const Matrix zt = transpose(z);
        const Matrix g = gram_rows(zt);
        if (!(max_diag(g) + lam > 0.0)) fail(ErrorKind::SingularKernel, "fit_features: feature covariance is zero");
        s = solve_spd(g, lam, matvec_t(z, data.y));
        a = s.x;
    }
    FittedModel m{FeatureModel{map, std::move(a)}, meta_from(s, lambda.lambda, lam)};
    m.meta.solver += n <= dim ? "/dual" : "/primal";
    return m;
}

FittedModel fit_linear_minnorm(const Dataset& data) {
    check_targets(data);
    if (data.n() > data.d()) fail(ErrorKind::InvalidRegime, "fit_linear_minnorm: needs n <= d");
    Matrix l = gram_rows(data.X.points);
    if (!cholesky_inplace(l)) fail(ErrorKind::SingularKernel, "fit_linear_minnorm: X X^T is singular");
    double lo = l(0, 0), hi = l(0, 0);
    for (std::size_t i = 0; i < l.rows(); ++i) {
        lo = std::min(lo, l(i, i));
        hi = std::max(hi, l(i, i));
    }
    // Squared diagonal ratio of the Cholesky factor is a cheap lower bound on cond(X X^T).
    if ((hi / lo) * (hi / lo) > 1e12) fail(ErrorKind::SingularKernel, "fit_linear_minnorm: X X^T is ill-conditioned");
    const Vector alpha = cholesky_solve(l, data.y);
    FittedModel m{LinearModel{matvec_t(data.X.points, alpha)}, {}};
    m.meta.solver = "cholesky";
    m.meta.rank = data.n();
    return m;
}

FittedModel fit_linear_ridge(const Dataset& data, double lambda) {
    check_targets(data);
    require(lambda >= 0.0, "fit_linear_ridge: lambda must be nonnegative");
    const double shift = static_cast<double>(data.n()) * lambda;
    const Matrix& X = data.X.points;
    SpdSolve s;
    Vector w;
    if (data.n() <= data.d()) {
        s = solve_spd(gram_rows(X), shift, data.y);
        w = matvec_t(X, s.x);
    } else {
        s = solve_spd(gram_rows(transpose(X)), shift, matvec_t(X, data.y));
        w = s.x;
    }
    FittedModel m{LinearModel{std::move(w)}, meta_from(s, lambda, shift)};
    return m;
}

double train_mse(const FittedModel& m, const Dataset& data) { return test_mse(m, data); }

double test_mse(const FittedModel& m, const Dataset& test) {
    const Vector pred = predict_batch(m, test.X.points);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - test.y[i];
        acc += r * r;
    }
    return acc / static_cast<double>(pred.size());
}

double rkhs_norm(const Vector& c, const Matrix& gram) {
    const double q = dot(c, matvec(gram, c));
    return std::sqrt(std::max(0.0, q));
}

double ridgeless_norm_limit(double gamma) {
    require(gamma > 0.0, "ridgeless_norm_limit: gamma must be positive");
    if (gamma == 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::fabs(1.0 - gamma);
}

double mse_limit(double gamma, RidgeRegime regime) {
    require(gamma > 0.0, "mse_limit: gamma must be positive");
    if (regime == RidgeRegime::LargeRidge) return 1.0;
    return std::max(0.0, 1.0 - 1.0 / gamma);
}

double ridge_norm_literal_form(double gamma, double nlambda) {
    require(gamma > 0.0 && nlambda >= 0.0, "ridge_norm_literal_form: need gamma > 0 and nlambda >= 0");
    const double u = gamma - nlambda + 1.0;
    return u / (2.0 * gamma * std::sqrt(u * u + 4.0 * nlambda)) - 1.0 / (2.0 * gamma);
}

}  // namespace lawbench

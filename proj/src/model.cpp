#include "lawbench/model.hpp"

#include "lawbench/error.hpp"
#include "lawbench/simd.hpp"

#include <cmath>

namespace lawbench {

namespace {

constexpr double kEdge = 1.0 - 1e-9;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Matrix single_row(const Vector& x) {
    Matrix m(1, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) m(0, i) = x[i];
    return m;
}

Vector two_layer_pred(const TwoLayerModel& m, const Matrix& X) {
    const Matrix pre = matmul_nt(X, m.W);
    Vector out(X.rows(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.v.size(); ++j) acc += m.v[j] * eval(m.activation, pre(i, j));
        out[i] = acc;
    }
    return out;
}

Matrix two_layer_grad(const TwoLayerModel& m, const Matrix& X) {
    const Matrix pre = matmul_nt(X, m.W);
    Matrix s(X.rows(), m.W.rows());
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < m.W.rows(); ++j) s(i, j) = m.v[j] * deriv(m.activation, pre(i, j));
    return matmul(s, m.W);
}

}  // namespace

std::size_t FittedModel::dim() const {
    return std::visit(overloaded{
                          [](const LinearModel& m) { return m.w.size(); },
                          [](const TwoLayerModel& m) { return m.W.cols(); },
                          [](const KernelModel& m) { return m.anchors.cols(); },
                          [](const FeatureModel& m) { return m.map.weights.dim(); },
                      },
                      family);
}

std::string FittedModel::family_name() const {
    return std::visit(overloaded{
                          [](const LinearModel&) { return std::string("linear"); },
                          [](const TwoLayerModel&) { return std::string("two-layer"); },
                          [](const KernelModel&) { return std::string("kernel"); },
                          [](const FeatureModel&) { return std::string("features"); },
                      },
                      family);
}

TwoLayerModel as_two_layer(const FeatureModel& m) {
    require(m.map.kind == FeatureKind::FrozenRF, "as_two_layer: only frozen random features reduce to a two-layer model");
    TwoLayerModel t{m.map.weights.W, m.a, m.map.activation};
    const double inv = 1.0 / std::sqrt(static_cast<double>(m.map.weights.width()));
    for (double& v : t.v) v *= inv;
    return t;
}

Vector predict_batch(const FittedModel& model, const Matrix& X) {
    require(X.cols() == model.dim(), "predict: dimension mismatch");
    return std::visit(
        overloaded{
            [&](const LinearModel& m) { return matvec(X, m.w); },
            [&](const TwoLayerModel& m) { return two_layer_pred(m, X); },
            [&](const KernelModel& m) { return matvec(gram_dot(m.kernel, X, m.anchors), m.c); },
            [&](const FeatureModel& m) {
                if (m.map.kind == FeatureKind::FrozenRF) return two_layer_pred(as_two_layer(m), X);
                // NTK: f(x) = (1/sqrt k) sum_j s'(w_j.x) (A_j . x), A the k x d reshape of a.
                const std::size_t k = m.map.weights.width();
                const std::size_t d = m.map.weights.dim();
                const double inv = 1.0 / std::sqrt(static_cast<double>(k));
                const Matrix pre = matmul_nt(X, m.map.weights.W);
                Vector out(X.rows(), 0.0);
                for (std::size_t i = 0; i < X.rows(); ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < k; ++j) {
                        const double s = deriv(m.map.activation, pre(i, j));
                        if (s != 0.0) acc += s * simd::dot(m.a.data() + j * d, X.row(i), d);
                    }
                    out[i] = inv * acc;
                }
                return out;
            },
        },
        model.family);
}

double predict(const FittedModel& m, const Vector& x) { return predict_batch(m, single_row(x))[0]; }

Matrix gradient_batch(const FittedModel& model, const Matrix& X, std::size_t* clamped) {
    require(X.cols() == model.dim(), "gradient: dimension mismatch");
    if (clamped) *clamped = 0;
    return std::visit(
        overloaded{
            [&](const LinearModel& m) {
                Matrix g(X.rows(), m.w.size());
                for (std::size_t i = 0; i < X.rows(); ++i)
                    for (std::size_t j = 0; j < m.w.size(); ++j) g(i, j) = m.w[j];
                return g;
            },
            [&](const TwoLayerModel& m) { return two_layer_grad(m, X); },
            [&](const KernelModel& m) {
                // grad = sum_i c_i phi'(x_i . x) x_i
                Matrix s = matmul_nt(X, m.anchors);
                for (std::size_t i = 0; i < s.rows(); ++i) {
                    for (std::size_t j = 0; j < s.cols(); ++j) {
                        double t = s(i, j);
                        if (std::fabs(t) > kEdge) {
                            t = std::copysign(kEdge, t);
                            if (clamped) ++*clamped;
                        }
                        const ProfileDerivative pd = kernel_profile_deriv(m.kernel, t);
                        if (!std::isfinite(pd.value))
                            fail(ErrorKind::NumericFailure,
                                 "kernel gradient: profile derivative not finite at t=" + std::to_string(t));
                        s(i, j) = m.c[j] * pd.value;
                    }
                }
                return matmul(s, m.anchors);
            },
            [&](const FeatureModel& m) {
                if (m.map.kind == FeatureKind::FrozenRF) return two_layer_grad(as_two_layer(m), X);
                // (1/sqrt k) [A^T s'(Wx) + W^T (s''(Wx) o A x)]
                const std::size_t k = m.map.weights.width();
                const std::size_t d = m.map.weights.dim();
                const double inv = 1.0 / std::sqrt(static_cast<double>(k));
                const Matrix& W = m.map.weights.W;
                const Matrix pre = matmul_nt(X, W);
                Matrix g(X.rows(), d);
                for (std::size_t i = 0; i < X.rows(); ++i) {
                    double* gi = g.row(i);
                    for (std::size_t j = 0; j < k; ++j) {
                        const double* aj = m.a.data() + j * d;
                        const double s1 = deriv(m.map.activation, pre(i, j));
                        if (s1 != 0.0) simd::axpy(inv * s1, aj, gi, d);
                        const double s2 = deriv2(m.map.activation, pre(i, j));
                        if (s2 != 0.0) simd::axpy(inv * s2 * simd::dot(aj, X.row(i), d), W.row(j), gi, d);
                    }
                }
                return g;
            },
        },
        model.family);
}

Vector model_gradient(const FittedModel& m, const Vector& x, bool* clamped) {
    std::size_t count = 0;
    const Matrix g = gradient_batch(m, single_row(x), &count);
    if (clamped) *clamped = count > 0;
    return Vector(g.row(0), g.row(0) + g.cols());
}

}  // namespace lawbench

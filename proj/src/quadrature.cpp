#include "lawbench/quadrature.hpp"

#include "lawbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lawbench {

QuadratureRule gauss_legendre(int order) {
    require(order >= 1, "gauss_legendre: order must be positive");
    const int n = order;
    QuadratureRule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

QuadratureRule golub_welsch(const Vector& alpha, const Vector& beta) {
    const std::size_t n = alpha.size();
    require(n >= 1 && beta.size() == n, "golub_welsch: bad recurrence");
    Matrix j(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        j(i, i) = alpha[i];
        if (i + 1 < n) {
            j(i, i + 1) = std::sqrt(beta[i + 1]);
            j(i + 1, i) = j(i, i + 1);
        }
    }
    EigenResult eig = jacobi_eigen(j, true, 1e-15);
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // ascending order
        const std::size_t col = n - 1 - i;
        r.nodes[i] = eig.values[col];
        const double v0 = eig.vectors(0, col);
        r.weights[i] = beta[0] * v0 * v0;
    }
    return r;
}

QuadratureRule gauss_hermite(int order) {
    require(order >= 1, "gauss_hermite: order must be positive");
    Vector alpha(order, 0.0), beta(order);
    beta[0] = 1.0;
    for (int k = 1; k < order; ++k) beta[k] = k;
    QuadratureRule r = golub_welsch(alpha, beta);
    // Eigenvector components only carry absolute accuracy, so tail weights
    // would be noise. Recompute them from the Christoffel function
    // 1 / sum_k h_k(x)^2 over the orthonormal Hermite polynomials.
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double x = r.nodes[i];
        double hm1 = 0.0, h = 1.0, sum = 0.0;
        for (int k = 0; k < order; ++k) {
            sum += h * h;
            const double hn = (x * h - std::sqrt(static_cast<double>(k)) * hm1) / std::sqrt(k + 1.0);
            hm1 = h;
            h = hn;
        }
        r.weights[i] = 1.0 / sum;
    }
    return r;
}

QuadratureRule gauss_hermite_half(int order) {
    require(order >= 1, "gauss_hermite_half: order must be positive");
    // Discretized Stieltjes: inner products of the monic orthogonal
    // polynomials are taken with a fine composite Gauss-Legendre rule on
    // [0, 40], far beyond where the weight underflows.
    const int panels = 400;
    const QuadratureRule base = gauss_legendre(20);
    const double upper = 40.0;
    const double h = upper / panels;
    Vector x, w;
    x.reserve(panels * base.nodes.size());
    w.reserve(panels * base.nodes.size());
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            const double z = mid + 0.5 * h * base.nodes[i];
            x.push_back(z);
            w.push_back(0.5 * h * base.weights[i] * norm * std::exp(-0.5 * z * z));
        }
    }
    const std::size_t m = x.size();
    Vector alpha(order), beta(order);
    Vector pprev(m, 0.0), pcur(m, 1.0), pnext(m);
    double nprev = 1.0;
    for (int k = 0; k < order; ++k) {
        double nk = 0.0, xk = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double q = w[i] * pcur[i] * pcur[i];
            nk += q;
            xk += q * x[i];
        }
        alpha[k] = xk / nk;
        beta[k] = k == 0 ? nk : nk / nprev;
        for (std::size_t i = 0; i < m; ++i)
            pnext[i] = (x[i] - alpha[k]) * pcur[i] - (k == 0 ? 0.0 : beta[k] * pprev[i]);
        pprev.swap(pcur);
        pcur.swap(pnext);
        nprev = nk;
    }
    return golub_welsch(alpha, beta);
}

namespace {

double composite(const std::function<double(double)>& f, const std::vector<double>& edges,
                 int panels_per_piece, const QuadratureRule& rule) {
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double lo = edges[s];
        const double hi = edges[s + 1];
        const double h = (hi - lo) / panels_per_piece;
        double piece = 0.0;
        for (int p = 0; p < panels_per_piece; ++p) {
            const double mid = lo + (p + 0.5) * h;
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
            piece += 0.5 * h * acc;
        }
        total += piece;
    }
    return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breakpoints, const IntegrateOptions& opt) {
    require(b >= a, "integrate: reversed interval");
    if (a == b) return 0.0;
    std::vector<double> edges{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double x : breakpoints)
        if (x > a && x < b && x - edges.back() > 1e-14 * (b - a)) edges.push_back(x);
    if (b - edges.back() <= 1e-14 * (b - a)) edges.back() = b;
    else edges.push_back(b);

    const QuadratureRule rule = gauss_legendre(opt.order);
    // Spread the initial panels over the pieces in proportion to length.
    const int pieces = static_cast<int>(edges.size()) - 1;
    int panels = std::max(1, opt.panels / pieces);
    double prev = composite(f, edges, panels, rule);
    for (int it = 0; it < opt.max_doublings; ++it) {
        panels *= 2;
        const double cur = composite(f, edges, panels, rule);
        if (!std::isfinite(cur)) break;
        if (std::fabs(cur - prev) < opt.tol) return cur;
        prev = cur;
    }
    fail(ErrorKind::NumericFailure, "integrate: composite Gauss-Legendre did not converge");
}

}  // namespace lawbench

// Acceptance runner: one PASS/FAIL line per criterion. `--only N` (repeatable)
// restricts the run; the exit status is nonzero if any selected criterion fails.

#include "lawbench/activation.hpp"
#include "lawbench/analysis.hpp"
#include "lawbench/config.hpp"
#include "lawbench/dataset.hpp"
#include "lawbench/interpolators.hpp"
#include "lawbench/robustness.hpp"
#include "lawbench/spectral.hpp"
#include "lawbench/sphere.hpp"
#include "lawbench/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace lawbench;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double phi_relu(double t) { return (t * std::acos(-t) + std::sqrt(1 - t * t)) / (2 * pi); }

Outcome kernel_closed_form() {
    std::vector<double> ts{-0.99};
    for (int i = -9; i <= 9; ++i) ts.push_back(i / 10.0);
    ts.push_back(0.99);
    auto relu = [](double t) { return std::max(t, 0.0); };
    double worst = 0;
    for (double t : ts) worst = std::max(worst, std::abs(10 * induced_kappa_quadrature(relu, 1, 10, t) - phi_relu(t)));
    return {worst <= 1e-6, fmt("max |d*kappa - phi_relu| = %.3g over %zu points (tol 1e-6)", worst, ts.size())};
}

Outcome sphere_moments() {
    const std::pair<int, int> pq[] = {{1, 1}, {2, 0}, {2, 2}, {1, 3}, {4, 0}};
    const std::size_t m = 1000000;
    double worst_z = 0;
    for (int d : {5, 50}) {
        Rng rng(mix_seed(2024, d));
        const Vector u = sample_sphere_point(d, rng);
        const Vector v = sample_sphere_point(d, rng);
        const double s = dot(u, v);
        double sum[5] = {}, sum2[5] = {};
        for (std::size_t i = 0; i < m; ++i) {
            const Vector x = sample_sphere_point(d, rng);
            const double a = dot(x, u), b = dot(x, v);
            for (int j = 0; j < 5; ++j) {
                const double f = std::pow(a, pq[j].first) * std::pow(b, pq[j].second);
                sum[j] += f;
                sum2[j] += f * f;
            }
        }
        for (int j = 0; j < 5; ++j) {
            const double mean = sum[j] / m;
            const double se = std::sqrt((sum2[j] / m - mean * mean) / m);
            worst_z = std::max(worst_z, std::abs(mean - moment_cpq(pq[j].first, pq[j].second, d, s)) / se);
        }
    }
    return {worst_z <= 4.0, fmt("worst deviation %.2f standard errors over 10 cases (tol 4)", worst_z)};
}

Outcome curvature() {
    const CurvatureCoeffs c = curvature_coeffs(Activation::ReLU);
    const double e0 = std::abs(c.beta0 - 1 / (2 * pi));
    const double e1 = std::abs(c.beta1 - 0.25);
    const double es = std::abs(c.beta_star - (0.25 - 1 / (2 * pi)));
    const double closed = std::abs((0.25 - 1 / (2 * pi)) - (pi - 2) / (4 * pi));
    const double vs_paper = std::abs(c.beta_star - (pi - 2) / (4 * pi));
    const bool ok = std::max({e0, e1, es, vs_paper}) <= 1e-8 && closed <= 1e-16;
    return {ok, fmt("errors beta0 %.2g, beta1 %.2g, beta* %.2g; beta* vs (pi-2)/(4pi) %.2g (tol 1e-8); "
                    "closed forms differ by %.2g",
                    e0, e1, es, vs_paper, closed)};
}

Outcome analytic_vs_mc() {
    int agree = 0;
    double worst = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(mix_seed(77, s));
        TwoLayerModel t;
        t.W = draw_weights(100, 100, RngSeed{mix_seed(78, s)}).W;
        t.v.resize(100);
        for (double& e : t.v) e = rng.normal();
        const FittedModel m{t, {}};
        const double a = sobolev_analytic(m, 100).value;
        const double mc = sobolev_monte_carlo(m, 20000, RngSeed{mix_seed(79, s)}).value;
        const double rel = std::abs(mc - a) / a;
        worst = std::max(worst, rel);
        agree += rel <= 0.05;
    }
    return {agree >= 18, fmt("%d/20 models within 5%% (need 18); worst relative gap %.3g", agree, worst)};
}

Outcome linear_exactness() {
    const std::size_t d = 20;
    Rng rng(5);
    Vector w(d);
    for (double& e : w) e = rng.normal();
    const auto exact = sobolev_exact_linear(w, d);
    const auto mc = sobolev_monte_carlo(FittedModel{LinearModel{w}, {}}, 100000, RngSeed{6});
    const double z = std::abs(mc.value * mc.value - exact.value * exact.value) / mc.std_error;
    const double formula = norm2(w) * std::sqrt(1 - 1.0 / d);
    // Same quantity through the analytic two-layer path with one identity neuron.
    TwoLayerModel one{Matrix(1, d), {norm2(w)}, Activation::Identity};
    for (std::size_t j = 0; j < d; ++j) one.W(0, j) = w[j] / norm2(w);
    const double via_analytic = sobolev_analytic(one, d).value;
    const double err = std::max(std::abs(exact.value - formula), std::abs(via_analytic - formula));
    return {z <= 3.0 && err <= 1e-12,
            fmt("MC off by %.2f std errors (tol 3); closed form error %.2g (tol 1e-12)", z, err)};
}

Outcome el_karoui() {
    const std::size_t ds[] = {50, 100, 200, 400};
    std::vector<double> med;
    std::vector<double> lmin400;
    for (std::size_t d : ds) {
        std::vector<double> gaps;
        for (std::uint64_t s = 0; s < 5; ++s) {
            const HiddenWeights w = draw_weights(d, d, RngSeed{mix_seed(600, d, s)});
            const Matrix c = c_sigma_cov(w, Activation::ReLU, d);
            gaps.push_back(op_distance(c, linearized_c(w, linearization_cov(Activation::ReLU, d))));
            if (d == 400) lmin400.push_back(sym_eigs(c, EigenMethod::Tridiagonal).lambda_min);
        }
        med.push_back(median(gaps));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < med.size(); ++i) decreasing &= med[i] < med[i - 1];
    const double floor = 0.5 * (pi - 2) / (4 * pi);
    const double lm = median(lmin400);
    return {decreasing && lm >= floor,
            fmt("median op gaps %.4f, %.4f, %.4f, %.4f (strictly decreasing: %s); "
                "lambda_min at d=400 %.4f (floor %.4f)",
                med[0], med[1], med[2], med[3], decreasing ? "yes" : "no", lm, floor)};
}

Outcome ridgeless_norm() {
    std::vector<double> norms, mses;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset a = gen_dataset(500, 1000, 1.0, RngSeed{mix_seed(700, s)}, DatasetOptions{true});
        const FittedModel fa = fit_linear_ridge(a, 0.0);
        const Vector& w = std::get<LinearModel>(fa.family).w;
        norms.push_back(dot(w, w) / 500);
        const Dataset b = gen_dataset(1000, 500, 1.0, RngSeed{mix_seed(701, s)}, DatasetOptions{true});
        mses.push_back(train_mse(fit_linear_ridge(b, 0.0), b));
    }
    const double mn = median(norms), mm = median(mses);
    return {mn >= 1.8 && mn <= 2.2 && mm >= 0.45 && mm <= 0.55,
            fmt("median |w|^2/n = %.4f in [1.8, 2.2]; median MSE at gamma=2 = %.4f in [0.45, 0.55]", mn, mm)};
}

Outcome large_ridge() {
    double worst = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset a = gen_dataset(500, 1000, 1.0, RngSeed{mix_seed(700, s)}, DatasetOptions{true});
        const FittedModel f = fit_linear_ridge(a, 1e3 / 500);
        const Vector& w = std::get<LinearModel>(f.family).w;
        worst = std::max(worst, dot(w, w) / 500);
    }
    return {worst <= 0.1, fmt("max over 10 seeds of |w|^2/n at n*lambda = 1e3: %.3g (tol 0.1)", worst)};
}

Outcome ntk_kronecker() {
    const std::size_t k = 2, d = 3;
    const HiddenWeights w = draw_weights(k, d, RngSeed{900});
    const FeatureMap map{FeatureKind::NTK, w, Activation::ReLU};
    const Matrix ct = c_tilde(w, Activation::ReLU, ProfileWhich::Derivative);
    Matrix target(k * d, k * d);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t i = 0; i < d; ++i) target(a * d + i, b * d + i) = ct(a, b) / k;
    const double centered = op_distance(c_phi_monte_carlo(map, 200000, RngSeed{901}), target);
    const double raw = op_distance(c_phi_monte_carlo(map, 200000, RngSeed{901}, false), target);
    return {centered <= 0.05, fmt("op distance %.4f (tol 0.05); uncentered second moment gives %.4f", centered, raw)};
}

Outcome law_scaling() {
    SweepConfig c = preset("exp3-mini");
    c.activation = Activation::ReLU;
    const auto rows = run_trials(c);
    std::ostringstream csv;
    write_csv_header(csv);
    for (const auto& r : rows) write_csv_row(csv, r);
    const LawSummary s = analyze_law(parse_csv(csv.str()), LawX::SqrtN, default_law_groups());
    if (s.groups.size() != 1) return {false, fmt("expected one group, got %zu", s.groups.size())};
    const LinearFit& f = s.groups[0].fit;
    return {f.correlation >= 0.9 && f.slope > 0,
            fmt("%zu rows: correlation %.4f (need 0.9), slope %.4f", f.count, f.correlation, f.slope)};
}

Outcome multiple_descent() {
    const auto rows = run_trials(preset("exp2-mini"));
    std::ostringstream csv;
    write_csv_header(csv);
    for (const auto& r : rows) write_csv_row(csv, r);
    const DescentSummary s = analyze_descent(parse_csv(csv.str()), Threshold::NEqK, default_descent_groups());
    double ridgeless = std::nan(""), ridged = std::nan("");
    for (const auto& g : s.groups) {
        const double lam = std::stod(g.key.at("lambda"));
        (lam == 0.0 ? ridgeless : ridged) = g.peak_ratio;
    }
    return {ridgeless >= 2 && ridged <= 0.5 * ridgeless,
            fmt("peak ratio at n=k: %.3f at lambda=0 (need 2), %.3f at lambda=1e-3 (need <= %.3f)", ridgeless, ridged,
                0.5 * ridgeless)};
}

Outcome mp_law() {
    Rng rng(1200);
    const std::size_t n = 500, d = 1000;
    Matrix g(n, d);
    for (std::size_t i = 0; i < n * d; ++i) g.data()[i] = rng.normal();
    Matrix s = gram_rows(g);
    for (std::size_t i = 0; i < n * n; ++i) s.data()[i] /= d;
    const double ks_wishart = ks_distance_mp(sym_eigs(s, EigenMethod::Tridiagonal).eigenvalues, 0.5);

    // Shifted absolute value a(|t| - b), centred with unit variance under N(0, 1),
    // applied to sqrt(d) x.w so the arguments are approximately standard normal.
    const std::size_t m = 500, k = 500, dd = 500;
    const double b = std::sqrt(2 / pi), a = 1 / std::sqrt(1 - 2 / pi);
    const SphereSample x = sample_sphere(dd, m, RngSeed{1201});
    const HiddenWeights w = draw_weights(k, dd, RngSeed{1202});
    Matrix z = matmul_nt(x.points, w.W);
    const double root_d = std::sqrt(double(dd));
    for (std::size_t i = 0; i < m * k; ++i) z.data()[i] = a * (std::abs(root_d * z.data()[i]) - b);
    Matrix zz = gram_rows(z);
    for (std::size_t i = 0; i < m * m; ++i) zz.data()[i] /= k;
    const double ks_rf = ks_distance_mp(sym_eigs(zz, EigenMethod::Tridiagonal).eigenvalues, double(m) / k);
    return {ks_wishart <= 0.05 && ks_rf <= 0.05,
            fmt("KS Wishart vs MP(0.5) %.4f; KS shifted-abs RF gram vs MP(1) %.4f (tol 0.05)", ks_wishart, ks_rf)};
}

Outcome poincare_ordering() {
    int violations = 0;
    double worst = -1e300;
    const std::size_t m = 4000;
    for (int i = 0; i < 50; ++i) {
        Rng rng(mix_seed(1300, i));
        const std::size_t d = 3 + i % 7 * 5;
        const std::size_t k = 4 + i % 5 * 6;
        FittedModel model;
        switch (i % 4) {
            case 0: {
                Vector w(d);
                for (double& e : w) e = rng.normal();
                model.family = LinearModel{w};
                break;
            }
            case 1: {
                const Activation acts[] = {Activation::ReLU, Activation::Abs, Activation::Erf, Activation::Tanh};
                TwoLayerModel t{draw_weights(k, d, RngSeed{rng.next_u64()}).W, Vector(k), acts[i / 4 % 4]};
                for (double& e : t.v) e = rng.normal();
                model.family = t;
                break;
            }
            case 2: {
                const DotProductKernel ks[] = {DotProductKernel::arccos1(), DotProductKernel::gaussian(1.0),
                                               DotProductKernel::ntk_infinite(Activation::ReLU),
                                               DotProductKernel::polynomial(1, 3)};
                const Dataset ds = gen_dataset(k, d, 0.5, RngSeed{rng.next_u64()});
                model = fit_kernel(ks[i / 4 % 4], ds, LambdaSpec{1e-3});
                break;
            }
            default: {
                const FeatureMap fm{i / 4 % 2 ? FeatureKind::NTK : FeatureKind::FrozenRF,
                                    draw_weights(k, d, RngSeed{rng.next_u64()}), Activation::ReLU};
                const Dataset ds = gen_dataset(k, d, 0.5, RngSeed{rng.next_u64()});
                model = fit_features(fm, ds, LambdaSpec{1e-3});
                break;
            }
        }
        const SobolevEstimate s = sobolev_monte_carlo(model, m, RngSeed{rng.next_u64()});
        const PoincareEstimate p = poincare_estimate(model, m, RngSeed{rng.next_u64()});
        const double s2 = s.value * s.value;
        const double rse_s = s2 > 0 ? s.std_error / s2 : 0.0;
        const double rse_p = p.value > 0 ? p.std_error / p.value : 0.0;
        const double bound = s2 * (1 + 5 * std::sqrt(rse_s * rse_s + rse_p * rse_p));
        violations += p.value > bound;
        if (s2 > 0) worst = std::max(worst, p.value / s2);
    }
    return {violations == 0, fmt("%d/50 violations; largest Poincare/Sobolev^2 ratio %.4f", violations, worst)};
}

Outcome determinism() {
    const SweepConfig c = parse_config(
        "regime = rf_finite\nactivation = relu\nn = 20\nd = 10\nk = 30\nlambda = 0, 1e-3\nzeta = 0.5\n"
        "datasets_per_cell = 1\nweight_draws_per_dataset = 1\nmc_samples = 200\ntest_size = 100\nbase_seed = 7\n");
    const auto dir = std::filesystem::temp_directory_path();
    auto run = [&](const std::string& name, std::size_t workers) {
        SweepConfig cc = c;
        cc.output_path = (dir / name).string();
        cc.workers = workers;
        run_sweep(cc);
        std::ifstream in(cc.output_path, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        std::filesystem::remove(cc.output_path);
        return s.str();
    };
    const std::string a = run("lawbench_accept_a.csv", 1);
    const std::string b = run("lawbench_accept_b.csv", 2);
    const CsvTable t = parse_csv(a);
    const std::vector<std::string> documented{
        "regime",    "activation", "n",          "d",          "k",           "lambda",
        "zeta",      "dataset_seed", "weight_seed", "train_mse", "test_mse",    "sobolev_mc",
        "sobolev_mc_stderr", "sobolev_analytic", "coef_norm", "eta", "rkhs_norm", "lambda_min_C",
        "lambda_max_C", "gram_cond", "solver_fallback", "reason"};
    std::ifstream golden(LAWBENCH_TEST_DATA_DIR "/golden_2cell.csv", std::ios::binary);
    std::ostringstream g;
    g << golden.rdbuf();
    const bool identical = a == b;
    const bool schema = csv_columns() == documented && t.header == documented && t.rows.size() == 2;
    const bool matches_golden = g.str() == a;
    return {identical && schema,
            fmt("rerun byte-identical: %s; schema matches: %s; identical to stored golden file: %s", identical ? "yes" : "no",
                schema ? "yes" : "no", matches_golden ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lawbench acceptance checks"};
    std::vector<int> only;
    app.add_option("--only", only, "criterion number (repeatable)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "closed-form kernel vs quadrature", 5, kernel_closed_form},
        {2, "sphere moments vs Monte Carlo", 30, sphere_moments},
        {3, "ReLU curvature coefficients", 1, curvature},
        {4, "analytic vs Monte-Carlo Sobolev", 120, analytic_vs_mc},
        {5, "linear Sobolev exactness", 10, linear_exactness},
        {6, "linearization of the ReLU covariance", 180, el_karoui},
        {7, "ridgeless norm and memorization MSE", 120, ridgeless_norm},
        {8, "large-ridge norm decay", 30, large_ridge},
        {9, "NTK Kronecker covariance", 60, ntk_kronecker},
        {10, "law-of-robustness scaling", 600, law_scaling},
        {11, "multiple descent and ridge attenuation", 900, multiple_descent},
        {12, "Marchenko-Pastur spectra", 180, mp_law},
        {13, "Poincare ordering", 180, poincare_ordering},
        {14, "determinism and CSV schema", 10, determinism},
    };

    int failed = 0;
    for (const Criterion& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::printf("[%s] %2d %s: %s; %.1fs (budget %.0fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(), secs,
                    c.budget_s, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

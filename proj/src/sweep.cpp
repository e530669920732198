#include "lawbench/sweep.hpp"

#include "lawbench/dataset.hpp"
#include "lawbench/error.hpp"
#include "lawbench/interpolators.hpp"
#include "lawbench/kernel.hpp"
#include "lawbench/robustness.hpp"
#include "lawbench/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

namespace lawbench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kTestSeedOffset = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kDataTag = 0xD1;
constexpr std::uint64_t kWeightTag = 0x3E;
constexpr std::uint64_t kSobolevTag = 0x50B;
constexpr std::uint64_t kCovTag = 0xC0F;
constexpr std::size_t kFastEigenThreshold = 200;

EigenMethod method_for(std::size_t n) {
    return n > kFastEigenThreshold ? EigenMethod::Tridiagonal : EigenMethod::Jacobi;
}

double cond_of(const Matrix& g) { return sym_eigs(g, method_for(g.rows())).cond; }

void set_spectrum(TrialRecord& r, const Matrix& c) {
    const SpectrumSummary s = sym_eigs(c, method_for(c.rows()));
    r.lambda_min_C = s.lambda_min;
    r.lambda_max_C = s.lambda_max;
}

std::vector<std::size_t> k_axis(const SweepConfig& cfg) {
    if (!has_hidden_weights(cfg.regime)) return {0};
    return cfg.k;
}

}  // namespace

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::Linear: return "linear";
        case Regime::RfFinite: return "rf_finite";
        case Regime::NtkFinite: return "ntk_finite";
        case Regime::RfInfinite: return "rf_infinite";
        case Regime::NtkInfinite: return "ntk_infinite";
    }
    return "unknown";
}

Regime parse_regime(std::string_view name) {
    for (Regime r : {Regime::Linear, Regime::RfFinite, Regime::NtkFinite, Regime::RfInfinite, Regime::NtkInfinite})
        if (regime_name(r) == name) return r;
    fail(ErrorKind::InvalidArgument, "unknown regime: " + std::string(name));
}

bool has_hidden_weights(Regime r) { return r == Regime::RfFinite || r == Regime::NtkFinite; }

void SweepConfig::validate() const {
    for (std::size_t v : n) require(v >= 1, "config: n values must be positive");
    for (std::size_t v : d) require(v >= 2, "config: d values must be at least 2");
    if (has_hidden_weights(regime))
        for (std::size_t v : k) require(v >= 1, "config: k values must be positive");
    for (double v : lambda) require(v >= 0.0 && std::isfinite(v), "config: lambda values must be nonnegative");
    for (double v : zeta) require(v >= 0.0 && v <= 1.0, "config: zeta values must lie in [0, 1]");
    require(datasets_per_cell >= 1, "config: datasets_per_cell must be positive");
    require(weight_draws_per_dataset >= 1, "config: weight_draws_per_dataset must be positive");
    require(mc_samples >= 100, "config: mc_samples must be at least 100");
    require(test_size >= 1, "config: test_size must be positive");
    require(workers >= 1, "config: workers must be positive");
}

std::uint64_t dataset_seed(std::uint64_t base, std::size_t n, std::size_t d, std::size_t dataset) {
    return mix_seed(base, kDataTag, n, d, dataset);
}

std::uint64_t weight_seed(std::uint64_t base, std::size_t d, std::size_t k, std::size_t dataset, std::size_t draw) {
    return mix_seed(base, kWeightTag, d, k, dataset, draw);
}

std::vector<TrialSpec> expand_grid(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<TrialSpec> out;
    const std::size_t draws = has_hidden_weights(cfg.regime) ? cfg.weight_draws_per_dataset : 1;
    const std::uint64_t base = cfg.base_seed.value;
    for (std::size_t n : cfg.n)
        for (std::size_t d : cfg.d)
            for (std::size_t k : k_axis(cfg))
                for (double lam : cfg.lambda)
                    for (double z : cfg.zeta)
                        for (std::size_t ds = 0; ds < cfg.datasets_per_cell; ++ds)
                            for (std::size_t w = 0; w < draws; ++w) {
                                TrialSpec t;
                                t.regime = cfg.regime;
                                t.activation = cfg.activation;
                                t.n = n;
                                t.d = d;
                                t.k = k;
                                t.lambda = lam;
                                t.zeta = z;
                                t.dataset_index = ds;
                                t.draw_index = w;
                                t.mc_samples = cfg.mc_samples;
                                t.test_size = cfg.test_size;
                                t.noise_only = cfg.noise_only;
                                t.dataset_seed = dataset_seed(base, n, d, ds);
                                t.weight_seed = has_hidden_weights(cfg.regime) ? weight_seed(base, d, k, ds, w) : 0;
                                out.push_back(t);
                            }
    return out;
}

TrialModel build_trial_model(const TrialSpec& spec) {
    TrialModel tm{gen_dataset(spec.n, spec.d, spec.zeta, RngSeed{spec.dataset_seed}, DatasetOptions{spec.noise_only}),
                  {}, {}};
    tm.test = gen_dataset_like(tm.train, spec.test_size, RngSeed{spec.dataset_seed + kTestSeedOffset});
    switch (spec.regime) {
        case Regime::Linear: tm.model = fit_linear_ridge(tm.train, spec.lambda); break;
        case Regime::RfFinite:
        case Regime::NtkFinite: {
            const bool rf = spec.regime == Regime::RfFinite;
            FeatureMap map{rf ? FeatureKind::FrozenRF : FeatureKind::NTK,
                           draw_weights(spec.k, spec.d, RngSeed{spec.weight_seed}), spec.activation};
            const LambdaSpec lam{spec.lambda, rf ? LambdaConvention::RfScaled : LambdaConvention::Plain, spec.k};
            tm.model = fit_features(map, tm.train, lam);
            break;
        }
        case Regime::RfInfinite:
        case Regime::NtkInfinite: {
            const DotProductKernel kern = spec.regime == Regime::RfInfinite
                                              ? DotProductKernel::rf_infinite(spec.activation)
                                              : DotProductKernel::ntk_infinite(spec.activation);
            tm.model = fit_kernel(kern, tm.train, LambdaSpec{spec.lambda, LambdaConvention::Plain, 0});
            break;
        }
    }
    return tm;
}

RngSeed sobolev_seed(const TrialSpec& spec) {
    return RngSeed{mix_seed(spec.dataset_seed, kSobolevTag, spec.weight_seed, spec.k)};
}

TrialRecord run_trial(const TrialSpec& spec) {
    TrialRecord r{spec, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, false, "ok"};
    try {
        const TrialModel tm = build_trial_model(spec);
        const FittedModel& model = tm.model;
        const Dataset& train = tm.train;
        const double d = static_cast<double>(spec.d);

        switch (spec.regime) {
            case Regime::Linear: {
                const Vector& w = std::get<LinearModel>(model.family).w;
                r.coef_norm = norm2(w);
                r.sobolev_analytic = sobolev_exact_linear(w, d).value;
                r.lambda_min_C = 1.0;
                r.lambda_max_C = 1.0;
                r.gram_cond = spec.n > spec.d ? std::numeric_limits<double>::infinity()
                                              : cond_of(gram_rows(train.X.points));
                break;
            }
            case Regime::RfFinite:
            case Regime::NtkFinite: {
                const FeatureModel& fm = std::get<FeatureModel>(model.family);
                const FeatureMap& map = fm.map;
                const RobustnessProxies px = proxies(model);
                r.rkhs_norm = px.rkhs_norm.value_or(kNaN);
                r.eta = px.eta.value_or(kNaN);
                if (spec.regime == Regime::RfFinite) {
                    r.coef_norm = norm2(fm.a) / std::sqrt(static_cast<double>(spec.k));
                    if (homogeneity_order(spec.activation)) {
                        r.sobolev_analytic = sobolev_analytic(model, d).value;
                        set_spectrum(r, c_sigma_cov(map.weights, spec.activation, d));
                    } else {
                        const std::size_t m = std::max<std::size_t>(2000, 4 * spec.k);
                        set_spectrum(r, c_phi_monte_carlo(map, m, RngSeed{mix_seed(spec.weight_seed, kCovTag)}));
                    }
                } else {
                    r.coef_norm = norm2(fm.a);
                    Matrix c = c_tilde(map.weights, spec.activation, ProfileWhich::Derivative);
                    for (std::size_t i = 0; i < c.rows() * c.cols(); ++i) c.data()[i] /= static_cast<double>(spec.k);
                    set_spectrum(r, c);
                }
                r.gram_cond = spec.n > map.output_dim() ? std::numeric_limits<double>::infinity()
                                                        : cond_of(empirical_gram(map, train.X.points));
                break;
            }
            case Regime::RfInfinite:
            case Regime::NtkInfinite: {
                const KernelModel& km = std::get<KernelModel>(model.family);
                const Matrix gram = gram_dot(km.kernel, train.X.points, train.X.points);
                r.coef_norm = norm2(km.c);
                r.rkhs_norm = proxies(model, &gram).rkhs_norm.value_or(kNaN);
                const SpectrumSummary s = sym_eigs(gram, method_for(gram.rows()));
                r.lambda_min_C = s.lambda_min;
                r.lambda_max_C = s.lambda_max;
                r.gram_cond = s.cond;
                break;
            }
        }
        r.solver_fallback = model.meta.fallback;
        r.train_mse = train_mse(model, train);
        r.test_mse = test_mse(model, tm.test);
        const SobolevEstimate mc = sobolev_monte_carlo(model, spec.mc_samples, sobolev_seed(spec));
        r.sobolev_mc = mc.value;
        r.sobolev_mc_stderr = mc.std_error;
    } catch (const Error& e) {
        r.reason = std::string(to_string(e.kind()));
    } catch (const std::exception&) {
        r.reason = "internal-error";
    }
    return r;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "regime",      "activation",      "n",         "d",           "k",           "lambda",
        "zeta",        "dataset_seed",    "weight_seed", "train_mse", "test_mse",    "sobolev_mc",
        "sobolev_mc_stderr", "sobolev_analytic", "coef_norm", "eta",     "rkhs_norm",   "lambda_min_C",
        "lambda_max_C", "gram_cond",      "solver_fallback", "reason"};
    return cols;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv_header(std::ostream& out) {
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
}

void write_csv_row(std::ostream& out, const TrialRecord& r) {
    const TrialSpec& s = r.spec;
    std::string k;
    if (s.regime == Regime::RfInfinite || s.regime == Regime::NtkInfinite) k = "inf";
    else k = std::to_string(s.k);
    out << regime_name(s.regime) << ',' << activation_name(s.activation) << ',' << s.n << ',' << s.d << ',' << k
        << ',' << format_double(s.lambda) << ',' << format_double(s.zeta) << ',' << s.dataset_seed << ','
        << s.weight_seed << ',' << format_double(r.train_mse) << ',' << format_double(r.test_mse) << ','
        << format_double(r.sobolev_mc) << ',' << format_double(r.sobolev_mc_stderr) << ','
        << format_double(r.sobolev_analytic) << ',' << format_double(r.coef_norm) << ',' << format_double(r.eta)
        << ',' << format_double(r.rkhs_norm) << ',' << format_double(r.lambda_min_C) << ','
        << format_double(r.lambda_max_C) << ',' << format_double(r.gram_cond) << ','
        << (r.solver_fallback ? "true" : "false") << ',' << r.reason << '\n';
}

std::vector<TrialRecord> run_trials(const SweepConfig& cfg) {
    const std::vector<TrialSpec> specs = expand_grid(cfg);
    std::vector<TrialRecord> out(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < specs.size(); i = next.fetch_add(1)) out[i] = run_trial(specs[i]);
    };
    const std::size_t nthreads = std::min(cfg.workers, std::max<std::size_t>(1, specs.size()));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

void run_sweep(const SweepConfig& cfg) {
    std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoError, "cannot open output file: " + cfg.output_path);
    const std::vector<TrialRecord> rows = run_trials(cfg);
    write_csv_header(out);
    for (const TrialRecord& r : rows) write_csv_row(out, r);
    out.flush();
    if (!out) fail(ErrorKind::IoError, "failed writing output file: " + cfg.output_path);
}

namespace {

std::vector<std::size_t> range(std::size_t lo, std::size_t hi, std::size_t step) {
    std::vector<std::size_t> v;
    for (std::size_t x = lo; x <= hi; x += step) v.push_back(x);
    return v;
}

const std::vector<double> kZetaGrid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

}  // namespace

SweepConfig preset(std::string_view name) {
    SweepConfig c;
    c.activation = Activation::ReLU;
    c.mc_samples = 500;
    c.test_size = 500;
    if (name == "exp1") {
        c.regime = Regime::NtkFinite;
        c.n = range(20, 3020, 100);
        c.d = {50};
        c.k = {40};
        c.lambda = {0.0, 1e-5, 1e-4, 1e-3};
        c.zeta = kZetaGrid;
        c.datasets_per_cell = 10;
        c.weight_draws_per_dataset = 15;
        c.output_path = "exp1.csv";
    } else if (name == "exp2") {
        c.regime = Regime::RfFinite;
        c.n = range(200, 1000, 100);
        c.d = {300};
        c.k = range(100, 1000, 50);
        c.lambda = {0.0, 1e-5, 1e-4, 1e-3};
        c.zeta = kZetaGrid;
        c.datasets_per_cell = 10;
        c.weight_draws_per_dataset = 15;
        c.output_path = "exp2.csv";
    } else if (name == "exp3") {
        c.regime = Regime::RfInfinite;
        c.n = range(100, 1000, 100);
        c.d = {500};
        c.lambda = {0.0};
        c.zeta = kZetaGrid;
        c.datasets_per_cell = 10;
        c.output_path = "exp3.csv";
    } else if (name == "exp1-mini") {
        c.regime = Regime::NtkFinite;
        c.n = range(20, 3020, 500);
        c.d = {50};
        c.k = {40};
        c.lambda = {0.0, 1e-3};
        c.zeta = {0.0, 0.4, 1.0};
        c.datasets_per_cell = 2;
        c.weight_draws_per_dataset = 2;
        c.output_path = "exp1-mini.csv";
    } else if (name == "exp2-mini") {
        c.regime = Regime::RfFinite;
        c.n = {200, 300, 400, 600, 800};
        c.d = {300};
        c.k = {400};
        c.lambda = {0.0, 1e-3};
        c.zeta = {0.2};
        c.datasets_per_cell = 3;
        c.weight_draws_per_dataset = 1;
        c.output_path = "exp2-mini.csv";
    } else if (name == "exp3-mini") {
        c.regime = Regime::RfInfinite;
        c.n = range(100, 900, 200);
        c.d = {500};
        c.lambda = {0.0};
        c.zeta = kZetaGrid;
        c.datasets_per_cell = 2;
        c.output_path = "exp3-mini.csv";
    } else {
        fail(ErrorKind::InvalidArgument, "unknown preset: " + std::string(name));
    }
    return c;
}

std::vector<std::string> preset_names() {
    return {"exp1", "exp2", "exp3", "exp1-mini", "exp2-mini", "exp3-mini"};
}

}  // namespace lawbench

// lawbench: command-line front end for data generation, fits, Sobolev
// estimates, sweeps and their analysis.

#include "lawbench/analysis.hpp"
#include "lawbench/config.hpp"
#include "lawbench/dataset.hpp"
#include "lawbench/error.hpp"
#include "lawbench/robustness.hpp"
#include "lawbench/simd.hpp"
#include "lawbench/spectral.hpp"
#include "lawbench/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace lawbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::IoError: return kExitIo;
        case ErrorKind::NumericFailure:
        case ErrorKind::SingularKernel:
        case ErrorKind::ResourceLimit: return kExitNumeric;
        default: return kExitConfig;
    }
}

// JSON has no inf/nan; those become strings so nothing is silently lost.
json num(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

void emit(const json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::IoError, "cannot open output file: " + out);
    f << text;
    if (!f) fail(ErrorKind::IoError, "failed writing output file: " + out);
}

json record_json(const TrialRecord& r) {
    std::ostringstream row;
    write_csv_row(row, r);
    std::string line = row.str();
    line.pop_back();
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    json j;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) j[cols[i]] = fields[i];
    return j;
}

Matrix read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot read matrix file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        for (char& c : line)
            if (c == ',' || c == ';') c = ' ';
        std::istringstream ls(line);
        std::vector<double> r;
        std::string tok;
        while (ls >> tok) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size()) fail(ErrorKind::InvalidArgument, "matrix file: bad number '" + tok + "'");
            r.push_back(v);
        }
        if (!r.empty()) rows.push_back(std::move(r));
    }
    require(!rows.empty(), "matrix file is empty");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == m.cols(), "matrix file: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

struct TrialFlags {
    std::string regime = "rf_infinite";
    std::string activation = "relu";
    std::size_t n = 200, d = 400, k = 100;
    double lambda = 0.0, zeta = 0.5;
    std::size_t mc_samples = 500, test_size = 500;
    bool noise_only = false;

    void attach(CLI::App* app) {
        app->add_option("--regime", regime, "linear | rf_finite | ntk_finite | rf_infinite | ntk_infinite");
        app->add_option("--activation", activation, "relu | abs | erf | tanh | identity");
        app->add_option("--n", n, "training points");
        app->add_option("--d", d, "input dimension");
        app->add_option("--k", k, "width (finite regimes)");
        app->add_option("--lambda", lambda, "ridge parameter");
        app->add_option("--zeta", zeta, "label noise level");
        app->add_option("--mc-samples", mc_samples, "Monte Carlo points for the Sobolev estimate");
        app->add_option("--test-size", test_size, "fresh test points");
        app->add_flag("--noise-only", noise_only, "use w0 = 0");
    }

    TrialSpec spec(std::uint64_t seed) const {
        SweepConfig c;
        c.regime = parse_regime(regime);
        c.activation = parse_activation(activation);
        c.n = {n};
        c.d = {d};
        c.k = {k};
        c.lambda = {lambda};
        c.zeta = {zeta};
        c.mc_samples = mc_samples;
        c.test_size = test_size;
        c.noise_only = noise_only;
        c.base_seed = RngSeed{seed};
        return expand_grid(c).at(0);
    }
};

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lawbench: robustness laws for random-features and NTK regimes"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out;
    std::string config_path;
    std::size_t workers = 0;
    std::string preset_name;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "64-bit base seed");
        sub->add_option("--out", out, "output path (stdout when omitted)");
    };

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a noisy-linear dataset on the sphere (JSON)");
    common(gen);
    std::size_t gen_n = 100, gen_d = 10;
    double gen_zeta = 0.5;
    bool gen_noise_only = false;
    gen->add_option("--n", gen_n, "points")->check(CLI::PositiveNumber);
    gen->add_option("--d", gen_d, "dimension");
    gen->add_option("--zeta", gen_zeta, "noise level");
    gen->add_flag("--noise-only", gen_noise_only, "w0 = 0");

    // eigs
    auto* eigs = app.add_subcommand("eigs", "spectrum of a symmetric matrix, or the MP law");
    common(eigs);
    std::string eig_in, eig_method = "jacobi";
    double mp_gamma = 0.0;
    eigs->add_option("--in", eig_in, "matrix file, one row per line");
    eigs->add_option("--method", eig_method, "jacobi | tridiagonal")->check(CLI::IsMember({"jacobi", "tridiagonal"}));
    eigs->add_option("--mp-gamma", mp_gamma, "compare against Marchenko-Pastur with this ratio (KS distance)");

    // fit / sobolev
    auto* fit = app.add_subcommand("fit", "run one trial and print its record (JSON)");
    common(fit);
    TrialFlags fit_flags;
    fit_flags.attach(fit);

    auto* sob = app.add_subcommand("sobolev", "Sobolev seminorm estimates for one fitted model (JSON)");
    common(sob);
    TrialFlags sob_flags;
    sob_flags.attach(sob);
    std::size_t poincare_samples = 2000;
    sob->add_option("--poincare-samples", poincare_samples, "samples for the Poincare variance bound");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a sweep and write the CSV");
    sweep->add_option("--seed", seed, "64-bit base seed (overrides config)");
    sweep->add_option("--out", out, "CSV path (overrides config)");
    sweep->add_option("--config", config_path, "key = value config file");
    sweep->add_option("--workers", workers, "concurrent trials");
    sweep->add_option("--preset", preset_name, "exp1 | exp2 | exp3 | exp1-mini | exp2-mini | exp3-mini")
        ->check(CLI::IsMember(preset_names()));

    // analyze-law
    auto* law = app.add_subcommand("analyze-law", "fit sobolev_mc against (zeta^2 - train_mse) * x");
    std::string law_in, law_x = "sqrt_n", law_group;
    law->add_option("--in", law_in, "sweep CSV")->required();
    law->add_option("--out", out, "JSON path (stdout when omitted)");
    law->add_option("--x", law_x, "sqrt_n | sqrt_n_over_k");
    law->add_option("--group-by", law_group, "comma-separated columns (default regime,activation)");

    // analyze-descent
    auto* desc = app.add_subcommand("analyze-descent", "peak ratio of sobolev_mc at an interpolation threshold");
    std::string desc_in, desc_threshold = "n_eq_k", desc_group;
    desc->add_option("--in", desc_in, "sweep CSV")->required();
    desc->add_option("--out", out, "JSON path (stdout when omitted)");
    desc->add_option("--threshold", desc_threshold, "n_eq_k | n_eq_d | n_eq_kd");
    desc->add_option("--group-by", desc_group, "comma-separated columns");

    // asymptotics
    auto* asym = app.add_subcommand("asymptotics", "limiting ridge norms and errors");
    double asym_gamma = 0.5, asym_nlambda = 0.0;
    asym->add_option("--gamma", asym_gamma, "aspect ratio n/d")->required();
    asym->add_option("--nlambda", asym_nlambda, "scaled ridge n * lambda");
    asym->add_option("--out", out, "JSON path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*gen) {
            const Dataset ds = gen_dataset(gen_n, gen_d, gen_zeta, RngSeed{seed}, DatasetOptions{gen_noise_only});
            json j;
            j["n"] = ds.n();
            j["d"] = ds.d();
            j["zeta"] = ds.zeta;
            j["bayes_error"] = ds.bayes_error();
            j["seed"] = seed;
            j["w0"] = ds.w0;
            json xs = json::array();
            for (std::size_t i = 0; i < ds.n(); ++i) xs.push_back(std::vector<double>(ds.X.row(i), ds.X.row(i) + ds.d()));
            j["X"] = std::move(xs);
            j["y"] = ds.y;
            emit(j, out);
        } else if (*eigs) {
            require(!eig_in.empty(), "eigs: --in is required");
            const Matrix m = read_matrix(eig_in);
            const SpectrumSummary s =
                sym_eigs(m, eig_method == "tridiagonal" ? EigenMethod::Tridiagonal : EigenMethod::Jacobi);
            json j;
            j["size"] = m.rows();
            j["method"] = eig_method;
            j["simd"] = simd::backend_name(simd::active_backend());
            j["lambda_max"] = num(s.lambda_max);
            j["lambda_min"] = num(s.lambda_min);
            j["cond"] = num(s.cond);
            j["eigenvalues"] = s.eigenvalues;
            if (mp_gamma > 0.0) j["ks_distance_mp"] = ks_distance_mp(s.eigenvalues, mp_gamma);
            emit(j, out);
        } else if (*fit) {
            const TrialRecord r = run_trial(fit_flags.spec(seed));
            emit(record_json(r), out);
            if (r.reason != "ok") return kExitNumeric;
        } else if (*sob) {
            const TrialSpec spec = sob_flags.spec(seed);
            const TrialModel tm = build_trial_model(spec);
            json j;
            j["family"] = tm.model.family_name();
            const SobolevEstimate mc = sobolev_monte_carlo(tm.model, spec.mc_samples, sobolev_seed(spec));
            j["monte_carlo"] = {{"value", num(mc.value)}, {"samples", mc.samples}, {"std_error_sq", num(mc.std_error)}};
            if (const auto* l = std::get_if<LinearModel>(&tm.model.family))
                j["exact_linear"] = num(sobolev_exact_linear(l->w, static_cast<double>(spec.d)).value);
            try {
                j["analytic"] = num(sobolev_analytic(tm.model, static_cast<double>(spec.d)).value);
            } catch (const Error&) {
                j["analytic"] = nullptr;
            }
            const PoincareEstimate p = poincare_estimate(tm.model, poincare_samples, RngSeed{mix_seed(seed, 0x90)});
            j["poincare_lower_bound"] = {{"value", num(p.value)}, {"std_error", num(p.std_error)}};
            emit(j, out);
        } else if (*sweep) {
            SweepConfig cfg;
            if (!preset_name.empty()) cfg = preset(preset_name);
            if (!config_path.empty()) cfg = load_config(config_path, cfg);
            if (sweep->count("--seed")) cfg.base_seed = RngSeed{seed};
            if (!out.empty()) cfg.output_path = out;
            if (workers > 0) cfg.workers = workers;
            require(!cfg.output_path.empty(), "sweep: no output path (use --out or output_path)");
            run_sweep(cfg);
            std::cerr << "wrote " << cfg.output_path << "\n";
        } else if (*law) {
            const CsvTable t = read_csv(law_in);
            const auto groups = law_group.empty() ? default_law_groups() : split_csv_list(law_group);
            const LawSummary s = analyze_law(t, parse_law_x(law_x), groups);
            json j;
            j["x"] = law_x;
            j["groups"] = json::array();
            for (const LawGroup& g : s.groups)
                j["groups"].push_back({{"key", g.key},
                                       {"count", g.fit.count},
                                       {"slope", num(g.fit.slope)},
                                       {"intercept", num(g.fit.intercept)},
                                       {"correlation", num(g.fit.correlation)}});
            j["warnings"] = s.warnings;
            for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
            emit(j, out);
        } else if (*desc) {
            const CsvTable t = read_csv(desc_in);
            const auto groups = desc_group.empty() ? default_descent_groups() : split_csv_list(desc_group);
            const DescentSummary s = analyze_descent(t, parse_threshold(desc_threshold), groups);
            json j;
            j["threshold"] = desc_threshold;
            j["groups"] = json::array();
            for (const DescentGroup& g : s.groups)
                j["groups"].push_back({{"key", g.key},
                                       {"threshold", g.threshold},
                                       {"n_peak", g.n_peak},
                                       {"n_low", g.n_low},
                                       {"n_high", g.n_high},
                                       {"median_peak", num(g.median_peak)},
                                       {"median_low", num(g.median_low)},
                                       {"median_high", num(g.median_high)},
                                       {"peak_ratio", num(g.peak_ratio)}});
            j["warnings"] = s.warnings;
            for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
            emit(j, out);
        } else if (*asym) {
            const AsymptoticsReport a = asymptotics(asym_gamma, asym_nlambda);
            json j;
            j["gamma"] = a.gamma;
            j["nlambda"] = a.nlambda;
            j["norm_limit"] = num(a.norm_limit);
            j["norm_diverges"] = a.norm_diverges;
            j["mse_limit"] = num(a.mse_limit);
            j["mp_norm_integral"] = num(a.mp_norm_integral);
            j["mp_mse_integral"] = num(a.mp_mse_integral);
            j["literal_form"] = num(a.literal_form);
            emit(j, out);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

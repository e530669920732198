#include <doctest.h>

#include "lawbench/analysis.hpp"
#include "lawbench/config.hpp"
#include "lawbench/error.hpp"
#include "lawbench/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lawbench;
namespace fs = std::filesystem;

namespace {

// The 2-cell configuration behind tests/data/golden_2cell.csv.
SweepConfig golden_config() {
    return parse_config(R"(
regime = rf_finite
activation = relu
n = 20
d = 10
k = 30
lambda = 0, 1e-3
zeta = 0.5
datasets_per_cell = 1
weight_draws_per_dataset = 1
mc_samples = 200
test_size = 100
base_seed = 7
)");
}

std::string to_csv(const std::vector<TrialRecord>& rows) {
    std::ostringstream out;
    write_csv_header(out);
    for (const auto& r : rows) write_csv_row(out, r);
    return out.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("lawbench_test_" + name); }

}  // namespace

TEST_SUITE("sweep") {
    TEST_CASE("regime names") {
        for (Regime r : {Regime::Linear, Regime::RfFinite, Regime::NtkFinite, Regime::RfInfinite, Regime::NtkInfinite})
            CHECK(parse_regime(regime_name(r)) == r);
        CHECK_THROWS_AS(parse_regime("deep"), Error);
    }

    TEST_CASE("grid expansion order and size") {
        SweepConfig c;
        c.regime = Regime::RfFinite;
        c.n = {10, 20};
        c.d = {5};
        c.k = {3, 4};
        c.lambda = {0.0, 0.1};
        c.zeta = {0.5};
        c.datasets_per_cell = 2;
        c.weight_draws_per_dataset = 3;
        const auto g = expand_grid(c);
        CHECK(g.size() == 2 * 2 * 2 * 2 * 3);
        CHECK(g[0].n == 10);
        CHECK(g[0].draw_index == 0);
        CHECK(g[1].draw_index == 1);
        CHECK(g[3].dataset_index == 1);
        CHECK(g.back().n == 20);
        // One dataset is shared across k and lambda, one W across lambda.
        CHECK(g[0].dataset_seed == g[6].dataset_seed);
        CHECK(g[0].weight_seed == g[6].weight_seed);
        CHECK(g[0].dataset_seed == g[12].dataset_seed);
        CHECK(g[0].weight_seed != g[12].weight_seed);
        CHECK(g[0].weight_seed != g[1].weight_seed);

        c.regime = Regime::RfInfinite;
        CHECK(expand_grid(c).size() == 2 * 2 * 1 * 2);
    }

    TEST_CASE("preset sizes") {
        CHECK(expand_grid(preset("exp1")).size() == 111600);
        CHECK(preset("exp1").n.size() == 31);
        CHECK(preset("exp1").n.front() == 20);
        CHECK(preset("exp1").n.back() == 3020);
        for (const auto& name : preset_names()) {
            const auto c = preset(name);
            CHECK_FALSE(expand_grid(c).empty());
            if (name.find("mini") != std::string::npos) CHECK(c.datasets_per_cell <= 5);
        }
        CHECK_THROWS_AS(preset("exp4"), Error);
    }

    TEST_CASE("invalid configs") {
        SweepConfig c = golden_config();
        c.zeta = {1.5};
        CHECK_THROWS_AS(expand_grid(c), Error);
        c = golden_config();
        c.d = {1};
        CHECK_THROWS_AS(expand_grid(c), Error);
    }

    TEST_CASE("empty grid dimension gives a header-only csv") {
        SweepConfig c = golden_config();
        c.lambda.clear();
        c.output_path = temp_path("empty.csv").string();
        run_sweep(c);
        std::ostringstream header;
        write_csv_header(header);
        CHECK(slurp(c.output_path) == header.str());
        fs::remove(c.output_path);
    }

    TEST_CASE("csv schema") {
        const std::vector<std::string> want{"regime",        "activation",        "n",
                                            "d",             "k",                 "lambda",
                                            "zeta",          "dataset_seed",      "weight_seed",
                                            "train_mse",     "test_mse",          "sobolev_mc",
                                            "sobolev_mc_stderr", "sobolev_analytic", "coef_norm",
                                            "eta",           "rkhs_norm",         "lambda_min_C",
                                            "lambda_max_C",  "gram_cond",         "solver_fallback",
                                            "reason"};
        CHECK(csv_columns() == want);
        CHECK(format_double(0.1) == "0.10000000000000001");
        CHECK(format_double(std::nan("")) == "nan");
        CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    }

    TEST_CASE("golden file") {
        const std::string got = to_csv(run_trials(golden_config()));
        const CsvTable want = read_csv(LAWBENCH_TEST_DATA_DIR "/golden_2cell.csv");
        const CsvTable have = parse_csv(got);
        CHECK(have.header == want.header);
        REQUIRE(have.rows.size() == want.rows.size());
        for (std::size_t r = 0; r < want.rows.size(); ++r)
            for (std::size_t c = 0; c < want.header.size(); ++c) {
                const std::string& a = have.rows[r][c];
                const std::string& b = want.rows[r][c];
                char* end = nullptr;
                const double vb = std::strtod(b.c_str(), &end);
                INFO(want.header[c] << " row " << r << ": " << a << " vs " << b);
                if (end == b.c_str() || *end != '\0' || b == "nan" || b == "inf")
                    CHECK(a == b);
                else
                    CHECK(std::stod(a) == doctest::Approx(vb).epsilon(1e-9).scale(1e-12));
            }
    }

    TEST_CASE("rerun is byte identical, with any worker count") {
        SweepConfig c = golden_config();
        c.output_path = temp_path("a.csv").string();
        run_sweep(c);
        const fs::path b = temp_path("b.csv");
        c.output_path = b.string();
        c.workers = 3;
        run_sweep(c);
        CHECK(slurp(temp_path("a.csv")) == slurp(b));
        fs::remove(temp_path("a.csv"));
        fs::remove(b);
    }

    TEST_CASE("unwritable output path") {
        SweepConfig c = golden_config();
        c.output_path = "/nonexistent-dir/x.csv";
        try {
            run_sweep(c);
            FAIL("expected io-error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::IoError);
        }
    }

    TEST_CASE("interpolating trials in every regime") {
        for (Regime r : {Regime::Linear, Regime::RfFinite, Regime::NtkFinite, Regime::RfInfinite, Regime::NtkInfinite}) {
            TrialSpec s;
            s.regime = r;
            s.n = 30;
            s.d = 40;
            s.k = 60;
            s.zeta = 0.5;
            s.mc_samples = 200;
            s.test_size = 100;
            s.dataset_seed = 11;
            s.weight_seed = 12;
            const TrialRecord t = run_trial(s);
            INFO(regime_name(r));
            CHECK(t.reason == "ok");
            CHECK(t.train_mse <= 1e-8);
            CHECK(std::isfinite(t.sobolev_mc));
            CHECK(t.sobolev_mc > 0);
            CHECK(std::isfinite(t.test_mse));
            CHECK(std::isfinite(t.lambda_max_C));
        }
    }

    TEST_CASE("linear trial follows the ridgeless norm law") {
        TrialSpec s;
        s.regime = Regime::Linear;
        s.n = 500;
        s.d = 1000;
        s.zeta = 1.0;
        s.noise_only = true;
        s.dataset_seed = 99;
        s.mc_samples = 100;
        s.test_size = 50;
        const TrialRecord t = run_trial(s);
        CHECK(t.train_mse <= 1e-8);
        const double norm = t.coef_norm * t.coef_norm / 500;
        CHECK(norm >= 1.6);
        CHECK(norm <= 2.4);
    }

    TEST_CASE("rf_infinite ReLU sits in the constant band") {
        TrialSpec s;
        s.regime = Regime::RfInfinite;
        s.n = 200;
        s.d = 400;
        s.zeta = 0.5;
        s.dataset_seed = dataset_seed(0, 200, 400, 0);
        const TrialRecord t = run_trial(s);
        const double band = t.sobolev_mc / (s.zeta * s.zeta * std::sqrt(200.0));
        MESSAGE("sobolev_mc / (zeta^2 sqrt n) = " << band);
        CHECK(band >= 0.05);
        CHECK(band <= 20);
    }

    TEST_CASE("failures become tagged rows") {
        TrialSpec s;
        s.regime = Regime::NtkFinite;
        s.activation = Activation::Tanh;
        s.n = 10;
        s.d = 3;
        s.k = 2;
        s.mc_samples = 100;
        s.test_size = 10;
        // Tanh has no analytic Sobolev path; the row must still be complete.
        const TrialRecord t = run_trial(s);
        CHECK(t.reason == "ok");
        CHECK(std::isnan(t.sobolev_analytic));

        SweepConfig c = golden_config();
        c.regime = Regime::Linear;
        c.n = {20};
        c.d = {10};
        c.lambda = {0.0};
        c.datasets_per_cell = 2;
        const auto rows = run_trials(c);
        CHECK(rows.size() == 2);
    }
}

TEST_SUITE("config") {
    TEST_CASE("grammar") {
        const SweepConfig c = parse_config(R"(# comment
regime = ntk_finite   # trailing comment
activation = tanh
n = 10:30:10, 100
d = 5
k = 2,3
lambda = 0, 1e-4
zeta = 0.1
datasets_per_cell = 2
weight_draws_per_dataset = 3
mc_samples = 300
test_size = 50
noise_only = true
base_seed = 18446744073709551615
output_path = out.csv
workers = 2
)");
        CHECK(c.regime == Regime::NtkFinite);
        CHECK(c.activation == Activation::Tanh);
        CHECK(c.n == std::vector<std::size_t>{10, 20, 30, 100});
        CHECK(c.k == std::vector<std::size_t>{2, 3});
        CHECK(c.lambda == std::vector<double>{0.0, 1e-4});
        CHECK(c.noise_only);
        CHECK(c.base_seed.value == 18446744073709551615ull);
        CHECK(c.output_path == "out.csv");
        CHECK(c.workers == 2);
    }

    TEST_CASE("preset then override") {
        const SweepConfig c = parse_config("preset = exp3-mini\ndatasets_per_cell = 1\n");
        CHECK(c.regime == Regime::RfInfinite);
        CHECK(c.datasets_per_cell == 1);
        CHECK(c.zeta.size() == 6);
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(parse_config("bogus = 1"), Error);
        CHECK_THROWS_AS(parse_config("n = ten"), Error);
        CHECK_THROWS_AS(parse_config("n 10"), Error);
        CHECK_THROWS_AS(parse_config("n = 10:5:1"), Error);
        CHECK_THROWS_AS(parse_config("noise_only = maybe"), Error);
        try {
            load_config("/nonexistent/config.txt");
            FAIL("expected io-error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::IoError);
        }
    }

    TEST_CASE("render round trip") {
        for (const auto& name : preset_names()) {
            const SweepConfig a = preset(name);
            const SweepConfig b = parse_config(render_config(a));
            CHECK(render_config(b) == render_config(a));
            CHECK(expand_grid(b).size() == expand_grid(a).size());
        }
    }
}

TEST_SUITE("analysis") {
    TEST_CASE("fit_line") {
        const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
        CHECK(f.slope == doctest::Approx(2.0));
        CHECK(f.intercept == doctest::Approx(1.0));
        CHECK(f.correlation == doctest::Approx(1.0));
        CHECK(std::isnan(fit_line({1, 2, 3}, {4, 4, 4}).correlation));
    }

    std::string planted_csv(bool flat) {
        std::ostringstream s;
        write_csv_header(s);
        for (std::size_t n : {100, 200, 300, 400, 600, 800})
            for (int rep = 0; rep < 3; ++rep) {
                TrialRecord r{};
                r.spec.regime = Regime::RfFinite;
                r.spec.n = n;
                r.spec.d = 300;
                r.spec.k = 400;
                r.spec.zeta = 0.5;
                r.train_mse = 0.01 * rep;
                const double x = (0.25 - r.train_mse) * std::sqrt(double(n));
                r.sobolev_mc = flat ? 3.0 : 2.0 * x;
                if (!flat && n == 400) r.sobolev_mc = 50.0;
                r.test_mse = r.sobolev_mc_stderr = r.sobolev_analytic = r.coef_norm = r.eta = r.rkhs_norm =
                    r.lambda_min_C = r.lambda_max_C = r.gram_cond = 0.0;
                write_csv_row(s, r);
            }
        return s.str();
    }

    TEST_CASE("planted law") {
        std::string text = planted_csv(false);
        // Drop the planted spike so the relation is exactly linear.
        CsvTable t = parse_csv(text);
        std::erase_if(t.rows, [&](const auto& row) { return row[t.column("n")] == "400"; });
        const auto s = analyze_law(t, LawX::SqrtN, default_law_groups());
        REQUIRE(s.groups.size() == 1);
        CHECK(std::abs(s.groups[0].fit.slope - 2.0) <= 1e-9);
        CHECK(std::abs(s.groups[0].fit.intercept) <= 1e-9);
        CHECK(s.groups[0].fit.correlation == doctest::Approx(1.0));

        const auto flat = analyze_law(parse_csv(planted_csv(true)), LawX::SqrtN, default_law_groups());
        CHECK(std::abs(flat.groups[0].fit.slope) <= 1e-12);
    }

    TEST_CASE("small groups are skipped with a warning") {
        CsvTable t = parse_csv(planted_csv(false));
        t.rows.resize(2);
        const auto s = analyze_law(t, LawX::SqrtNOverK, default_law_groups());
        CHECK(s.groups.empty());
        CHECK(s.warnings.size() == 1);
    }

    TEST_CASE("rows with a failure reason are ignored") {
        CsvTable t = parse_csv(planted_csv(false));
        std::erase_if(t.rows, [&](const auto& row) { return row[t.column("n")] == "400"; });
        t.rows[0][t.column("reason")] = "numeric-failure";
        t.rows[0][t.column("sobolev_mc")] = "nan";
        const auto s = analyze_law(t, LawX::SqrtN, default_law_groups());
        CHECK(s.groups[0].fit.count == t.rows.size() - 1);
    }

    TEST_CASE("descent") {
        const auto spike = analyze_descent(parse_csv(planted_csv(false)), Threshold::NEqK, default_descent_groups());
        REQUIRE(spike.groups.size() == 1);
        CHECK(spike.groups[0].n_peak == 400);
        CHECK(spike.groups[0].n_low == 200);
        CHECK(spike.groups[0].n_high == 800);
        CHECK(spike.groups[0].peak_ratio > 2.0);
        const auto flat = analyze_descent(parse_csv(planted_csv(true)), Threshold::NEqK, default_descent_groups());
        CHECK(flat.groups[0].peak_ratio == doctest::Approx(1.0));
        // n = d = 300 is in range, n = k d is not.
        CHECK_NOTHROW(analyze_descent(parse_csv(planted_csv(true)), Threshold::NEqD, default_descent_groups()));
        CHECK_THROWS_AS(analyze_descent(parse_csv(planted_csv(true)), Threshold::NEqKD, default_descent_groups()), Error);
    }

    TEST_CASE("parsers") {
        CHECK(parse_law_x("sqrt_n") == LawX::SqrtN);
        CHECK(parse_law_x("sqrt_n_over_k") == LawX::SqrtNOverK);
        CHECK(parse_threshold("n_eq_kd") == Threshold::NEqKD);
        CHECK_THROWS_AS(parse_threshold("n_eq_q"), Error);
        CHECK_THROWS_AS(read_csv("/nonexistent.csv"), Error);
        CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
    }

    TEST_CASE("asymptotics") {
        auto a = asymptotics(0.5, 0);
        CHECK(a.norm_limit == doctest::Approx(2.0));
        CHECK(a.mse_limit == 0.0);
        CHECK(a.mp_norm_integral == doctest::Approx(2.0).epsilon(1e-6));
        a = asymptotics(2, 0);
        CHECK(a.norm_limit == doctest::Approx(1.0));
        CHECK(a.mse_limit == doctest::Approx(0.5));
        a = asymptotics(0.5, 1e6);
        CHECK(a.mp_norm_integral <= 1e-5);
        a = asymptotics(1, 0);
        CHECK(a.norm_diverges);
        CHECK(std::isinf(a.norm_limit));
        CHECK_THROWS_AS(asymptotics(0, 0), Error);
    }
}

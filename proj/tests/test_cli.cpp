#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(LAWBENCH_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, p)) out.append(buf, got);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("lawbench_cli_" + name); }

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("asymptotics") {
        const Run r = cli("asymptotics --gamma 0.5 --nlambda 0");
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["norm_limit"].get<double>() == doctest::Approx(2.0));
        CHECK(j["mse_limit"].get<double>() == 0.0);
        const auto div = nlohmann::json::parse(cli("asymptotics --gamma 1").out);
        CHECK(div["norm_diverges"].get<bool>());
        CHECK(div["norm_limit"] == "inf");
    }

    TEST_CASE("exit codes") {
        CHECK(cli("").code == 2);
        CHECK(cli("no-such-command").code == 2);
        CHECK(cli("asymptotics").code == 2);
        CHECK(cli("asymptotics --gamma -1").code == 2);
        CHECK(cli("fit --regime deep").code == 2);
        CHECK(cli("fit --activation softplus").code == 2);
        CHECK(cli("analyze-law --in /nonexistent.csv").code == 3);
        CHECK(cli("sweep --preset exp3-mini --out /nonexistent-dir/x.csv").code == 3);
        CHECK(cli("sweep --config /nonexistent.cfg --out x.csv").code == 3);
        CHECK(cli("gen-data --n 3 --d 2 --out /nonexistent-dir/x.json").code == 3);
        // n > d in the linear regime is ordinary least squares, not an error
        CHECK(cli("fit --regime linear --n 10 --d 5 --zeta 0.5").code == 0);
        CHECK(cli("--help").code == 0);
    }

    TEST_CASE("gen-data is reproducible") {
        const Run a = cli("gen-data --n 4 --d 3 --zeta 0.2 --seed 5");
        const Run b = cli("gen-data --n 4 --d 3 --zeta 0.2 --seed 5");
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        const auto j = nlohmann::json::parse(a.out);
        CHECK(j["X"].size() == 4);
        CHECK(j["y"].size() == 4);
        CHECK(j["bayes_error"].get<double>() == doctest::Approx(0.04));
    }

    TEST_CASE("eigs") {
        const fs::path m = tmp("m.txt");
        std::ofstream(m) << "2 1\n1 2\n";
        for (const char* method : {"jacobi", "tridiagonal"}) {
            const Run r = cli("eigs --in " + m.string() + " --method " + method);
            REQUIRE(r.code == 0);
            const auto j = nlohmann::json::parse(r.out);
            CHECK(j["eigenvalues"][0].get<double>() == doctest::Approx(3.0));
            CHECK(j["eigenvalues"][1].get<double>() == doctest::Approx(1.0));
        }
        std::ofstream(m) << "1 2\n3\n";
        CHECK(cli("eigs --in " + m.string()).code == 2);
        fs::remove(m);
    }

    TEST_CASE("fit and sobolev") {
        const Run f = cli("fit --regime rf_finite --n 20 --d 10 --k 40 --zeta 0.5 --mc-samples 200 --test-size 50 --seed 3");
        REQUIRE(f.code == 0);
        const auto j = nlohmann::json::parse(f.out);
        CHECK(j["reason"] == "ok");
        CHECK(std::stod(j["train_mse"].get<std::string>()) <= 1e-8);
        const Run s = cli("sobolev --regime rf_finite --n 20 --d 10 --k 40 --zeta 0.5 --mc-samples 2000 --seed 3");
        REQUIRE(s.code == 0);
        const auto js = nlohmann::json::parse(s.out);
        const double mc = js["monte_carlo"]["value"].get<double>();
        const double an = js["analytic"].get<double>();
        CHECK(mc == doctest::Approx(an).epsilon(0.15));
        CHECK(js["poincare_lower_bound"]["value"].get<double>() <= mc * mc * 1.2);
    }

    TEST_CASE("sweep and analysis") {
        const fs::path cfg = tmp("sweep.cfg");
        const fs::path csv = tmp("sweep.csv");
        std::ofstream(cfg) << "regime = rf_infinite\nn = 20:60:20\nd = 30\nlambda = 0\nzeta = 0.3, 0.6\n"
                              "datasets_per_cell = 2\nmc_samples = 100\ntest_size = 20\n";
        REQUIRE(cli("sweep --config " + cfg.string() + " --out " + csv.string() + " --seed 4 --workers 2").code == 0);
        std::ifstream in(csv);
        std::string line;
        std::size_t lines = 0;
        while (std::getline(in, line)) ++lines;
        CHECK(lines == 1 + 3 * 2 * 2);
        const Run law = cli("analyze-law --in " + csv.string() + " --x sqrt_n");
        REQUIRE(law.code == 0);
        const auto j = nlohmann::json::parse(law.out);
        CHECK(j["groups"].size() == 1);
        CHECK(j["groups"][0]["count"].get<int>() == 12);
        // Flanks at 15 and 60 snap to the nearest grid cells.
        CHECK(cli("analyze-descent --in " + csv.string() + " --threshold n_eq_d").code == 0);
        CHECK(cli("analyze-descent --in " + csv.string() + " --threshold n_eq_kd").code == 2);
        std::ofstream(cfg) << "regime = rf_infinite\nbogus = 3\n";
        CHECK(cli("sweep --config " + cfg.string() + " --out " + csv.string()).code == 2);
        fs::remove(cfg);
        fs::remove(csv);
    }
}

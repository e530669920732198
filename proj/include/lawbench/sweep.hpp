#pragma once

#include "lawbench/activation.hpp"
#include "lawbench/dataset.hpp"
#include "lawbench/model.hpp"
#include "lawbench/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace lawbench {

enum class Regime { Linear, RfFinite, NtkFinite, RfInfinite, NtkInfinite };

std::string_view regime_name(Regime r);
Regime parse_regime(std::string_view name);
/// Regimes with hidden weights W.
bool has_hidden_weights(Regime r);

struct SweepConfig {
    Regime regime = Regime::RfInfinite;
    Activation activation = Activation::ReLU;
    std::vector<std::size_t> n;
    std::vector<std::size_t> d;
    std::vector<std::size_t> k;  // ignored by regimes without hidden weights
    std::vector<double> lambda;
    std::vector<double> zeta;
    std::size_t datasets_per_cell = 1;
    std::size_t weight_draws_per_dataset = 1;  // forced to 1 without hidden weights
    std::size_t mc_samples = 500;
    std::size_t test_size = 500;
    bool noise_only = false;
    RngSeed base_seed{0};
    std::string output_path;
    std::size_t workers = 1;

    void validate() const;
};

/// One grid cell plus repetition indices.
struct TrialSpec {
    Regime regime = Regime::RfInfinite;
    Activation activation = Activation::ReLU;
    std::size_t n = 0, d = 0, k = 0;
    double lambda = 0.0;
    double zeta = 0.0;
    std::size_t dataset_index = 0;
    std::size_t draw_index = 0;
    std::size_t mc_samples = 500;
    std::size_t test_size = 500;
    bool noise_only = false;
    std::uint64_t dataset_seed = 0;
    std::uint64_t weight_seed = 0;
};

struct TrialRecord {
    TrialSpec spec;
    double train_mse;
    double test_mse;
    double sobolev_mc;
    double sobolev_mc_stderr;
    double sobolev_analytic;
    double coef_norm;  // ||w||, ||v|| = ||a|| / sqrt k, ||a|| or ||c|| by regime
    double eta;
    double rkhs_norm;
    double lambda_min_C;
    double lambda_max_C;
    double gram_cond;
    bool solver_fallback = false;
    std::string reason = "ok";
};

/// Seeds depend on (base, n, d, dataset) for data and (base, d, k, dataset, draw)
/// for weights, so one dataset is shared across the lambda, zeta and k axes.
std::uint64_t dataset_seed(std::uint64_t base, std::size_t n, std::size_t d, std::size_t dataset);
std::uint64_t weight_seed(std::uint64_t base, std::size_t d, std::size_t k, std::size_t dataset, std::size_t draw);

/// Cell-major order: n, d, k, lambda, zeta, dataset, draw (last fastest).
std::vector<TrialSpec> expand_grid(const SweepConfig& cfg);

struct TrialModel {
    Dataset train;
    Dataset test;  // fresh inputs, same w0 and noise level
    FittedModel model;
};

/// Data generation and fit for one trial; throws on failure.
TrialModel build_trial_model(const TrialSpec& spec);
/// Seed of the Monte Carlo Sobolev estimate for a trial.
RngSeed sobolev_seed(const TrialSpec& spec);

/// Never throws for numeric trouble: failures land in `reason` with NaN metrics.
TrialRecord run_trial(const TrialSpec& spec);

const std::vector<std::string>& csv_columns();
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const TrialRecord& r);
/// %.17g, with "nan" and "inf"/"-inf" spelled out.
std::string format_double(double v);

/// Runs every trial (concurrently up to cfg.workers) and returns them in grid order.
std::vector<TrialRecord> run_trials(const SweepConfig& cfg);
/// Writes the CSV to cfg.output_path; throws IoError if it cannot be written.
void run_sweep(const SweepConfig& cfg);

/// exp1, exp2, exp3 and their -mini variants.
SweepConfig preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace lawbench

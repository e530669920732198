#pragma once

#include <map>
#include <string>
#include <vector>

namespace lawbench {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index; throws InvalidArgument if absent.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

enum class LawX { SqrtN, SqrtNOverK };
LawX parse_law_x(const std::string& s);

struct LinearFit {
    std::size_t count = 0;
    double slope = 0.0;
    double intercept = 0.0;
    double correlation = 0.0;  // NaN when either variable is constant
};

/// Ordinary least squares of y on x plus the Pearson correlation.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct LawGroup {
    std::map<std::string, std::string> key;
    LinearFit fit;
};

struct LawSummary {
    std::vector<LawGroup> groups;
    std::vector<std::string> warnings;
};

/// Per group, regresses sobolev_mc on (zeta^2 - train_mse) * x. Rows whose
/// reason is not "ok" are ignored; groups with fewer than 3 points are skipped.
LawSummary analyze_law(const CsvTable& t, LawX x, const std::vector<std::string>& group_by);

enum class Threshold { NEqK, NEqD, NEqKD };
Threshold parse_threshold(const std::string& s);

struct DescentGroup {
    std::map<std::string, std::string> key;
    double threshold = 0.0;
    double n_peak = 0.0, n_low = 0.0, n_high = 0.0;
    double median_peak = 0.0, median_low = 0.0, median_high = 0.0;
    double peak_ratio = 0.0;  // min(peak / low, peak / high)
};

struct DescentSummary {
    std::vector<DescentGroup> groups;
    std::vector<std::string> warnings;
};

/// Median sobolev_mc at the n nearest the threshold against the n nearest
/// half and twice the threshold. Throws InvalidArgument if no group's
/// threshold lies within its n range.
DescentSummary analyze_descent(const CsvTable& t, Threshold th, const std::vector<std::string>& group_by);

const std::vector<std::string>& default_law_groups();
const std::vector<std::string>& default_descent_groups();

struct AsymptoticsReport {
    double gamma = 0.0;
    double nlambda = 0.0;
    double norm_limit = 0.0;        // ridgeless 1/|1 - gamma|
    bool norm_diverges = false;
    double mse_limit = 0.0;         // ridgeless when nlambda = 0, large-ridge otherwise
    double mp_norm_integral = 0.0;
    double mp_mse_integral = 0.0;
    double literal_form = 0.0;
};

AsymptoticsReport asymptotics(double gamma, double nlambda);

}  // namespace lawbench

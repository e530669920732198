#include "lawbench/analysis.hpp"

#include "lawbench/error.hpp"
#include "lawbench/interpolators.hpp"
#include "lawbench/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lawbench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double to_number(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan" || s.empty()) return kNaN;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) fail(ErrorKind::InvalidArgument, "csv: not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::map<std::string, std::string> group_key(const CsvTable& t, std::size_t row, const std::vector<std::string>& by) {
    std::map<std::string, std::string> key;
    for (const std::string& col : by) key[col] = t.rows[row][t.column(col)];
    return key;
}

bool usable(const CsvTable& t, std::size_t row) {
    return t.rows[row][t.column("reason")] == "ok" && std::isfinite(t.number(row, "sobolev_mc"));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

std::string describe(const std::map<std::string, std::string>& key) {
    std::string s;
    for (const auto& [k, v] : key) s += (s.empty() ? "" : " ") + k + "=" + v;
    return s.empty() ? "(all rows)" : s;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) fail(ErrorKind::InvalidArgument, "csv: missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const { return to_number(rows[row][column(name)]); }

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
            continue;
        }
        if (fields.size() != t.header.size())
            fail(ErrorKind::InvalidArgument, "csv: row has " + std::to_string(fields.size()) + " fields, header has " +
                                                 std::to_string(t.header.size()));
        t.rows.push_back(std::move(fields));
    }
    if (first) fail(ErrorKind::InvalidArgument, "csv: empty input");
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, "cannot read csv: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

LawX parse_law_x(const std::string& s) {
    if (s == "sqrt_n") return LawX::SqrtN;
    if (s == "sqrt_n_over_k") return LawX::SqrtNOverK;
    fail(ErrorKind::InvalidArgument, "unknown x expression: " + s);
}

Threshold parse_threshold(const std::string& s) {
    if (s == "n_eq_k") return Threshold::NEqK;
    if (s == "n_eq_d") return Threshold::NEqD;
    if (s == "n_eq_kd") return Threshold::NEqKD;
    fail(ErrorKind::InvalidArgument, "unknown threshold expression: " + s);
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), "fit_line: length mismatch");
    LinearFit f;
    f.count = x.size();
    if (x.empty()) return f;
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    f.slope = sxx > 0.0 ? sxy / sxx : kNaN;
    f.intercept = std::isnan(f.slope) ? kNaN : my - f.slope * mx;
    f.correlation = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : kNaN;
    return f;
}

const std::vector<std::string>& default_law_groups() {
    static const std::vector<std::string> g{"regime", "activation"};
    return g;
}

const std::vector<std::string>& default_descent_groups() {
    static const std::vector<std::string> g{"regime", "activation", "d", "k", "lambda", "zeta"};
    return g;
}

LawSummary analyze_law(const CsvTable& t, LawX xexpr, const std::vector<std::string>& group_by) {
    std::map<std::map<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (!usable(t, r)) continue;
        const double zeta = t.number(r, "zeta");
        const double eps = t.number(r, "train_mse");
        const double n = t.number(r, "n");
        double scale = std::sqrt(n);
        if (xexpr == LawX::SqrtNOverK) scale = std::sqrt(n / t.number(r, "k"));
        const double x = (zeta * zeta - eps) * scale;
        if (!std::isfinite(x)) continue;
        auto& g = groups[group_key(t, r, group_by)];
        g.first.push_back(x);
        g.second.push_back(t.number(r, "sobolev_mc"));
    }
    LawSummary s;
    for (const auto& [key, xy] : groups) {
        if (xy.first.size() < 3) {
            s.warnings.push_back("skipped group " + describe(key) + ": fewer than 3 points");
            continue;
        }
        s.groups.push_back({key, fit_line(xy.first, xy.second)});
    }
    return s;
}

DescentSummary analyze_descent(const CsvTable& t, Threshold th, const std::vector<std::string>& group_by) {
    // group -> n -> sobolev values
    std::map<std::map<std::string, std::string>, std::map<double, std::vector<double>>> groups;
    std::map<std::map<std::string, std::string>, double> thresholds;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (!usable(t, r)) continue;
        const auto key = group_key(t, r, group_by);
        const double d = t.number(r, "d");
        const double k = t.number(r, "k");
        double thr = th == Threshold::NEqD ? d : (th == Threshold::NEqK ? k : k * d);
        groups[key][t.number(r, "n")].push_back(t.number(r, "sobolev_mc"));
        auto it = thresholds.find(key);
        if (it == thresholds.end()) thresholds[key] = thr;
        else if (it->second != thr) it->second = kNaN;  // threshold varies inside the group
    }
    DescentSummary s;
    for (const auto& [key, by_n] : groups) {
        const double thr = thresholds[key];
        const double lo_n = by_n.begin()->first;
        const double hi_n = by_n.rbegin()->first;
        if (!std::isfinite(thr) || thr < lo_n || thr > hi_n) {
            s.warnings.push_back("skipped group " + describe(key) + ": threshold outside the n grid or not constant");
            continue;
        }
        auto nearest = [&](double target) {
            double best = by_n.begin()->first;
            for (const auto& [n, v] : by_n)
                if (std::fabs(n - target) < std::fabs(best - target)) best = n;
            return best;
        };
        DescentGroup g;
        g.key = key;
        g.threshold = thr;
        g.n_peak = nearest(thr);
        g.n_low = nearest(0.5 * thr);
        g.n_high = nearest(2.0 * thr);
        g.median_peak = median(by_n.at(g.n_peak));
        g.median_low = median(by_n.at(g.n_low));
        g.median_high = median(by_n.at(g.n_high));
        g.peak_ratio = std::min(g.median_peak / g.median_low, g.median_peak / g.median_high);
        s.groups.push_back(g);
    }
    if (s.groups.empty()) fail(ErrorKind::InvalidArgument, "analyze_descent: threshold lies outside the n grid");
    return s;
}

AsymptoticsReport asymptotics(double gamma, double nlambda) {
    require(gamma > 0.0, "asymptotics: gamma must be positive");
    require(nlambda >= 0.0, "asymptotics: nlambda must be nonnegative");
    AsymptoticsReport a;
    a.gamma = gamma;
    a.nlambda = nlambda;
    a.norm_limit = ridgeless_norm_limit(gamma);
    a.norm_diverges = std::isinf(a.norm_limit);
    a.mse_limit = mse_limit(gamma, nlambda == 0.0 ? RidgeRegime::Ridgeless : RidgeRegime::LargeRidge);
    a.mp_norm_integral = mp_integral(gamma, nlambda, MPIntegral::Norm);
    a.mp_mse_integral = mp_integral(gamma, nlambda, MPIntegral::Mse);
    a.literal_form = ridge_norm_literal_form(gamma, nlambda);
    return a;
}

}  // namespace lawbench

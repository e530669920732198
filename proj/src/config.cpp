#include "lawbench/config.hpp"

#include "lawbench/error.hpp"
#include "lawbench/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lawbench {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, int line) {
    fail(ErrorKind::InvalidArgument,
         "config line " + std::to_string(line) + ": bad value for '" + key + "': '" + value + "'");
}

std::uint64_t parse_u64(const std::string& s, const std::string& key, int line) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) bad(key, s, line);
    return v;
}

double parse_double(const std::string& s, const std::string& key, int line) {
    if (s.empty()) bad(key, s, line);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) bad(key, s, line);
    return v;
}

std::vector<std::size_t> parse_size_list(const std::string& value, const std::string& key, int line) {
    std::vector<std::size_t> out;
    if (value.empty()) return out;
    for (const std::string& item : split(value, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_u64(parts[0], key, line));
        } else if (parts.size() == 3) {
            const std::uint64_t lo = parse_u64(parts[0], key, line);
            const std::uint64_t hi = parse_u64(parts[1], key, line);
            const std::uint64_t step = parse_u64(parts[2], key, line);
            if (step == 0 || hi < lo) bad(key, item, line);
            for (std::uint64_t x = lo; x <= hi; x += step) out.push_back(x);
        } else {
            bad(key, item, line);
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& value, const std::string& key, int line) {
    std::vector<double> out;
    if (value.empty()) return out;
    for (const std::string& item : split(value, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(parse_double(parts[0], key, line));
        } else if (parts.size() == 3) {
            const double lo = parse_double(parts[0], key, line);
            const double hi = parse_double(parts[1], key, line);
            const double step = parse_double(parts[2], key, line);
            if (!(step > 0.0) || hi < lo) bad(key, item, line);
            // Integer stepping avoids accumulating rounding in lo + i*step.
            const long count = std::lround(std::floor((hi - lo) / step + 1e-9));
            for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
        } else {
            bad(key, item, line);
        }
    }
    return out;
}

bool parse_bool(const std::string& s, const std::string& key, int line) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    bad(key, s, line);
}

}  // namespace

SweepConfig parse_config(std::string_view text, SweepConfig c) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::InvalidArgument, "config line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        try {
            if (key == "preset") c = preset(value);
            else if (key == "regime") c.regime = parse_regime(value);
            else if (key == "activation") c.activation = parse_activation(value);
            else if (key == "n") c.n = parse_size_list(value, key, line);
            else if (key == "d") c.d = parse_size_list(value, key, line);
            else if (key == "k") c.k = parse_size_list(value, key, line);
            else if (key == "lambda") c.lambda = parse_double_list(value, key, line);
            else if (key == "zeta") c.zeta = parse_double_list(value, key, line);
            else if (key == "datasets_per_cell") c.datasets_per_cell = parse_u64(value, key, line);
            else if (key == "weight_draws_per_dataset") c.weight_draws_per_dataset = parse_u64(value, key, line);
            else if (key == "mc_samples") c.mc_samples = parse_u64(value, key, line);
            else if (key == "test_size") c.test_size = parse_u64(value, key, line);
            else if (key == "noise_only") c.noise_only = parse_bool(value, key, line);
            else if (key == "base_seed") c.base_seed = RngSeed{parse_u64(value, key, line)};
            else if (key == "output_path") c.output_path = value;
            else if (key == "workers") c.workers = parse_u64(value, key, line);
            else fail(ErrorKind::InvalidArgument, "config line " + std::to_string(line) + ": unknown key '" + key + "'");
        } catch (const Error& e) {
            // Unknown activation names surface as an invalid config, not an unsupported activation.
            if (e.kind() == ErrorKind::InvalidArgument) throw;
            fail(ErrorKind::InvalidArgument, "config line " + std::to_string(line) + ": " + e.what());
        }
    }
    c.validate();
    return c;
}

SweepConfig load_config(const std::string& path, SweepConfig base) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string render_config(const SweepConfig& c) {
    auto sizes = [](const std::vector<std::size_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    auto doubles = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
        return s;
    };
    std::ostringstream o;
    o << "regime = " << regime_name(c.regime) << '\n'
      << "activation = " << activation_name(c.activation) << '\n'
      << "n = " << sizes(c.n) << '\n'
      << "d = " << sizes(c.d) << '\n'
      << "k = " << sizes(c.k) << '\n'
      << "lambda = " << doubles(c.lambda) << '\n'
      << "zeta = " << doubles(c.zeta) << '\n'
      << "datasets_per_cell = " << c.datasets_per_cell << '\n'
      << "weight_draws_per_dataset = " << c.weight_draws_per_dataset << '\n'
      << "mc_samples = " << c.mc_samples << '\n'
      << "test_size = " << c.test_size << '\n'
      << "noise_only = " << (c.noise_only ? "true" : "false") << '\n'
      << "base_seed = " << c.base_seed.value << '\n'
      << "output_path = " << c.output_path << '\n'
      << "workers = " << c.workers << '\n';
    return o.str();
}

}  // namespace lawbench

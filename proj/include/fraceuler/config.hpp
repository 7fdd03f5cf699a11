#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fraceuler/core.hpp"
#include "fraceuler/report.hpp"

namespace fraceuler {

// Flat key = value experiment configuration. Documented keys:
//   experiment        constants | strong_rate | naive_rate | clt_check |
//                     rosenblatt_check | weak_error | weighted_sums
//   h                 Hurst parameter in (0.5, 1)
//   h_list            comma list of Hurst values (constants sweep)
//   t_horizon         time horizon T > 0                     (default 1)
//   ns                comma list of step counts, increasing, each dividing the largest
//   mc_paths          Monte Carlo sample size                (default 1000)
//   p_moment          L^p moment for strong errors           (default 2)
//   system            coefficient system name                (default geometric)
//   master_seed       64-bit seed                            (default 12345)
//   output_dir        directory for CSV/SVG output           (default .)
//   P                 lag truncation for constants           (default 512)
//   tolerance         constants tail tolerance, q-units      (default 1e-4)
//   sub_factor        fine subgrid factor for block integrals(default 64)
//   reference_refine  refinement of the weak-error reference (default 64)
//   slope_tolerance   allowed |slope - target| in rate checks(default 0.1)
//   var_tolerance     allowed relative variance gap          (default per experiment)
//   threads           worker threads, 0 = library default    (default 0)
// Unknown keys and duplicate keys are hard errors.

struct ExperimentConfig {
    std::string experiment;
    double h = 0.0;
    std::vector<double> h_list;
    double t_horizon = 1.0;
    std::vector<std::int64_t> ns;
    std::int64_t mc_paths = 1000;
    int p_moment = 2;
    std::string system = "geometric";
    std::uint64_t master_seed = 12345;
    std::string output_dir = ".";
    std::int64_t p_truncation = 512;
    double tolerance = 1e-4;
    std::int64_t sub_factor = 64;
    std::int64_t reference_refine = 64;
    double slope_tolerance = 0.1;
    std::optional<double> var_tolerance;
    int threads = 0;

    /// Canonical serialization of the experiment-defining fields. output_dir
    /// and threads are excluded: they affect where results go and how fast
    /// they are computed, never what is computed.
    std::string canonical() const {
        std::ostringstream out;
        out << "experiment=" << experiment << "\n";
        out << "h=" << Cell::number(h).format() << "\n";
        if (!h_list.empty()) {
            out << "h_list=";
            for (std::size_t i = 0; i < h_list.size(); ++i)
                out << (i ? "," : "") << Cell::number(h_list[i]).format();
            out << "\n";
        }
        out << "t_horizon=" << Cell::number(t_horizon).format() << "\n";
        if (!ns.empty()) {
            out << "ns=";
            for (std::size_t i = 0; i < ns.size(); ++i) out << (i ? "," : "") << ns[i];
            out << "\n";
        }
        out << "mc_paths=" << mc_paths << "\n";
        out << "p_moment=" << p_moment << "\n";
        out << "system=" << system << "\n";
        out << "master_seed=" << master_seed << "\n";
        out << "P=" << p_truncation << "\n";
        out << "tolerance=" << Cell::number(tolerance).format() << "\n";
        out << "sub_factor=" << sub_factor << "\n";
        out << "reference_refine=" << reference_refine << "\n";
        out << "slope_tolerance=" << Cell::number(slope_tolerance).format() << "\n";
        if (var_tolerance)
            out << "var_tolerance=" << Cell::number(*var_tolerance).format() << "\n";
        return out.str();
    }

    std::string hash() const { return fnv1a_hex(canonical()); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& v, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("parse error at line " + std::to_string(line) + ": bad number '" + v +
                          "'");
    return x;
}

inline std::int64_t parse_int(const std::string& v, int line) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("parse error at line " + std::to_string(line) + ": bad integer '" + v +
                          "'");
    return x;
}

inline std::uint64_t parse_uint(const std::string& v, int line) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("parse error at line " + std::to_string(line) + ": bad integer '" + v +
                          "'");
    return x;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& v, int line, Parse&& parse) {
    std::vector<T> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const std::string item = trim(v.substr(start, comma - start));
        if (item.empty())
            throw ConfigError("parse error at line " + std::to_string(line) + ": empty list item");
        out.push_back(parse(item, line));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "constants",        "strong_rate", "naive_rate",    "clt_check",
        "rosenblatt_check", "weak_error",  "weighted_sums",
    };
    return names;
}

inline void validate_config(const ExperimentConfig& cfg) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
        throw ConfigError("validation error: unknown experiment '" + cfg.experiment + "'");
    auto check_h = [](double h) {
        if (!(h > 0.5) || !(h < 1.0))
            throw ConfigError("validation error: h out of (0.5,1), got " + std::to_string(h));
    };
    if (cfg.h_list.empty()) {
        check_h(cfg.h);
    } else {
        for (double h : cfg.h_list) check_h(h);
    }
    if (!(cfg.t_horizon > 0.0)) throw ConfigError("validation error: t_horizon must be > 0");
    if (cfg.mc_paths < 1) throw ConfigError("validation error: mc_paths must be >= 1");
    if (cfg.p_moment < 1) throw ConfigError("validation error: p_moment must be >= 1");
    if (cfg.sub_factor < 1) throw ConfigError("validation error: sub_factor must be >= 1");
    if (cfg.reference_refine < 1)
        throw ConfigError("validation error: reference_refine must be >= 1");
    if (cfg.p_truncation < 8) throw ConfigError("validation error: P must be >= 8");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("validation error: tolerance must be > 0");
    if (!cfg.ns.empty()) {
        for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
            if (cfg.ns[i] < 1) throw ConfigError("validation error: ns entries must be >= 1");
            if (i > 0 && cfg.ns[i] <= cfg.ns[i - 1])
                throw ConfigError("validation error: ns must be strictly increasing");
        }
        for (std::int64_t n : cfg.ns)
            if (cfg.ns.back() % n != 0)
                throw ConfigError(
                    "validation error: every n must divide the finest grid (dyadic-divisible)");
    }
}

inline ExperimentConfig parse_config(const std::string& content) {
    ExperimentConfig cfg;
    std::map<std::string, int> seen;
    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    bool have_h = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parse error at line " + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = detail::trim(text.substr(0, eq));
        const std::string value = detail::trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("parse error at line " + std::to_string(line_no) +
                              ": empty key or value");
        if (auto [it, inserted] = seen.emplace(key, line_no); !inserted)
            throw ConfigError("parse error at line " + std::to_string(line_no) +
                              ": duplicate key '" + key + "' (first at line " +
                              std::to_string(it->second) + ")");

        if (key == "experiment") cfg.experiment = value;
        else if (key == "h") { cfg.h = detail::parse_double(value, line_no); have_h = true; }
        else if (key == "h_list")
            cfg.h_list = detail::parse_list<double>(value, line_no, detail::parse_double);
        else if (key == "t_horizon") cfg.t_horizon = detail::parse_double(value, line_no);
        else if (key == "ns")
            cfg.ns = detail::parse_list<std::int64_t>(value, line_no, detail::parse_int);
        else if (key == "mc_paths") cfg.mc_paths = detail::parse_int(value, line_no);
        else if (key == "p_moment")
            cfg.p_moment = static_cast<int>(detail::parse_int(value, line_no));
        else if (key == "system") cfg.system = value;
        else if (key == "master_seed") cfg.master_seed = detail::parse_uint(value, line_no);
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "P") cfg.p_truncation = detail::parse_int(value, line_no);
        else if (key == "tolerance") cfg.tolerance = detail::parse_double(value, line_no);
        else if (key == "sub_factor") cfg.sub_factor = detail::parse_int(value, line_no);
        else if (key == "reference_refine")
            cfg.reference_refine = detail::parse_int(value, line_no);
        else if (key == "slope_tolerance")
            cfg.slope_tolerance = detail::parse_double(value, line_no);
        else if (key == "var_tolerance")
            cfg.var_tolerance = detail::parse_double(value, line_no);
        else if (key == "threads")
            cfg.threads = static_cast<int>(detail::parse_int(value, line_no));
        else
            throw ConfigError("parse error at line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
    }
    if (cfg.experiment.empty())
        throw ConfigError("validation error: missing required key 'experiment'");
    if (!have_h && cfg.h_list.empty())
        throw ConfigError("validation error: missing required key 'h'");
    if (!have_h && !cfg.h_list.empty()) cfg.h = cfg.h_list.front();
    validate_config(cfg);
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace fraceuler

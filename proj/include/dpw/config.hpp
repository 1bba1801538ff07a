#ifndef DPW_CONFIG_HPP
#define DPW_CONFIG_HPP

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "loop.hpp"
#include "surface.hpp"

namespace dpw {

/// Invalid user input (bad parameter, malformed config file).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    double r = 1.0 / 3.0;
    int degree = default_truncation_degree;
    int lambda_samples = 128;
    double ode_tol = 1e-10;
    double rho_min = 0.1;
    double rho_max = 5.0;
    int n_radial = 128;
    int n_angular = 64;
    std::string out = "surface.obj";
    std::string reference_out;   // defaults to <out stem>_delaunay.<ext>
    std::string report;          // defaults to <out stem>_report.json
    double alpha_offset = 0.0;
    bool unitarize = false;

    void validate() const {
        if (!std::isfinite(r) || !(r < 1.0) || r == 0.0)
            throw ConfigError("r must lie in (-inf, 1) \\ {0}, got " + std::to_string(r));
        if (degree < 1) throw ConfigError("degree must be positive");
        if (!is_power_of_two(static_cast<std::size_t>(std::max(lambda_samples, 0))) || lambda_samples < 2)
            throw ConfigError("lambda-samples must be a power of two");
        if (lambda_samples < 2 * degree + 2)
            throw ConfigError("lambda-samples must be at least 2 * degree + 2");
        if (!(ode_tol > 0.0) || ode_tol >= 1e-2) throw ConfigError("tol must lie in (0, 1e-2)");
        if (!(rho_min > 0.0) || !(rho_max > rho_min) || !std::isfinite(rho_max))
            throw ConfigError("annulus must satisfy 0 < rho_min < rho_max");
        if (n_radial < 5) throw ConfigError("grid needs at least 5 radial nodes");
        if (n_angular < 8) throw ConfigError("grid needs at least 8 angular nodes");
        if (!std::isfinite(alpha_offset)) throw ConfigError("alpha offset must be finite");
    }

    DomainGrid domain() const { return {rho_min, rho_max, n_radial, n_angular}; }

    std::string stem() const {
        const auto dot = out.rfind('.');
        const auto slash = out.rfind('/');
        if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out;
        return out.substr(0, dot);
    }
    std::string extension() const {
        const auto s = stem();
        return s.size() < out.size() ? out.substr(s.size()) : std::string(".obj");
    }
    std::string reference_path() const { return reference_out.empty() ? stem() + "_delaunay" + extension() : reference_out; }
    std::string report_path() const { return report.empty() ? stem() + "_report.json" : report; }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    // Accept simple fractions such as 1/3 or -1/4.
    if (const auto slash = v.find('/'); slash != std::string::npos && slash > 0)
        return parse_double(key, v.substr(0, slash)) / parse_double(key, v.substr(slash + 1));
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
    if (used != v.size()) throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
    return static_cast<int>(x);
}

inline std::pair<std::string, std::string> split_pair(const std::string& key, const std::string& v) {
    const auto c = v.find(':');
    if (c == std::string::npos) throw ConfigError("'" + key + "' expects a:b, got '" + v + "'");
    return {v.substr(0, c), v.substr(c + 1)};
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

} // namespace detail

/// Applies one key=value setting. Keys match the long command-line flags.
inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "r") cfg.r = parse_double(key, value);
    else if (key == "degree") cfg.degree = parse_int(key, value);
    else if (key == "lambda-samples") cfg.lambda_samples = parse_int(key, value);
    else if (key == "tol") cfg.ode_tol = parse_double(key, value);
    else if (key == "annulus") {
        const auto [a, b] = split_pair(key, value);
        cfg.rho_min = parse_double(key, a);
        cfg.rho_max = parse_double(key, b);
    } else if (key == "grid") {
        const auto [a, b] = split_pair(key, value);
        cfg.n_radial = parse_int(key, a);
        cfg.n_angular = parse_int(key, b);
    } else if (key == "out") cfg.out = value;
    else if (key == "reference-out") cfg.reference_out = value;
    else if (key == "report") cfg.report = value;
    else if (key == "alpha-offset") cfg.alpha_offset = parse_double(key, value);
    else if (key == "unitarize") cfg.unitarize = value == "1" || value == "true" || value == "yes";
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
inline void load_config_file(RunConfig& cfg, std::istream& in, const std::string& name = "config") {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
        apply_setting(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    load_config_file(cfg, in, path);
}

} // namespace dpw

#endif // DPW_CONFIG_HPP

#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace afbm::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& what, const std::string& value) {
    throw ConfigError("field '" + key + "': " + what + ", got '" + value + "'");
}

double parse_real(const std::string& key, const std::string& v) {
    const std::string s = trim(v);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x)) bad(key, "expected a real number", v);
    return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
    const std::string s = trim(v);
    char* end = nullptr;
    errno = 0;
    if (s.empty() || s[0] == '-' || s[0] == '+') bad(key, "expected a non-negative integer", v);
    const unsigned long long x = std::strtoull(s.c_str(), &end, 10);
    if (*end != '\0' || errno == ERANGE) bad(key, "expected a non-negative integer", v);
    return x;
}

template <class F>
auto parse_list(const std::string& key, const std::string& v, F item) {
    std::vector<decltype(item(key, v))> out;
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(item(key, part));
    if (out.empty()) bad(key, "expected a comma-separated list", v);
    return out;
}

}  // namespace

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "alpha")
        cfg.alpha = parse_real(key, value);
    else if (key == "seed")
        cfg.seed = parse_unsigned(key, value);
    else if (key == "n_terms")
        cfg.n_terms = parse_unsigned(key, value);
    else if (key == "grid_n")
        cfg.grid_n = parse_unsigned(key, value);
    else if (key == "t_max")
        cfg.t_max = parse_real(key, value);
    else if (key == "eps_list")
        cfg.eps_list = parse_list(key, value, parse_real);
    else if (key == "n_list") {
        std::vector<std::size_t> n;
        for (auto x : parse_list(key, value, parse_unsigned)) n.push_back(x);
        cfg.n_list = n;
    } else if (key == "n_mc")
        cfg.n_mc = parse_unsigned(key, value);
    else if (key == "output_path")
        cfg.output_path = trim(value);
    else if (key == "threads")
        cfg.threads = unsigned(parse_unsigned(key, value));
    else
        throw ConfigError("field '" + key + "': unknown field");
}

void apply_config_text(std::istream& in, ExperimentConfig& cfg) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" + trim(line) + "'");
        set_field(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file '" + path + "': cannot be opened");
    apply_config_text(in, cfg);
}

void validate(const ExperimentConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ConfigError("field 'alpha': must lie in (0, 1), got " + std::to_string(cfg.alpha));
    if (cfg.alpha == 0.5)
        throw ConfigError("field 'alpha': 1/2 is excluded (the kernel prefactor degenerates)");
    if (!(cfg.t_max > 0.0)) throw ConfigError("field 't_max': must be positive");
    if (cfg.n_terms && *cfg.n_terms < 1) throw ConfigError("field 'n_terms': must be at least 1");
    if (cfg.grid_n && *cfg.grid_n < 2) throw ConfigError("field 'grid_n': must be at least 2");
    if (cfg.n_mc && *cfg.n_mc < 2) throw ConfigError("field 'n_mc': must be at least 2");
    if (cfg.eps_list) {
        const auto& e = *cfg.eps_list;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!(e[i] > 0.0)) throw ConfigError("field 'eps_list': entries must be positive");
            if (i > 0 && !(e[i] < e[i - 1])) throw ConfigError("field 'eps_list': must be strictly decreasing");
        }
    }
    if (cfg.n_list) {
        const auto& n = *cfg.n_list;
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (n[i] < 1) throw ConfigError("field 'n_list': entries must be at least 1");
            if (i > 0 && !(n[i] > n[i - 1])) throw ConfigError("field 'n_list': must be strictly increasing");
        }
    }
}

}  // namespace afbm::cli

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace afbm::cli {

// Unset optionals take the defaults of the subcommand that reads them.
struct ExperimentConfig {
    double alpha = 0.4;
    std::uint64_t seed = 1;
    std::optional<std::size_t> n_terms;
    std::optional<std::size_t> grid_n;
    double t_max = 1.0;
    std::optional<std::vector<double>> eps_list;
    std::optional<std::vector<std::size_t>> n_list;
    std::optional<std::size_t> n_mc;
    std::string output_path;
    unsigned threads = 0;
};

// Message names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// key = value lines; '#' starts a comment. Lists are comma separated.
void apply_config_text(std::istream& in, ExperimentConfig& cfg);
void load_config_file(const std::string& path, ExperimentConfig& cfg);

// Sets one field from its textual value, as a config line would.
void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& value);

void validate(const ExperimentConfig& cfg);

}  // namespace afbm::cli

#pragma once

#include <ostream>
#include <string>

#include "config.hpp"

namespace afbm::cli {

enum ExitCode : int { exit_ok = 0, exit_gate = 1, exit_usage = 2 };

// Each command writes its CSV table to csv and diagnostics to log, and returns
// an exit code. Outputs depend only on the config.
int cmd_sample(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_kernel_check(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_cov_check(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_levy_area(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_levy_volume(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_converge_series(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_converge_eps(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_specfun_test(const ExperimentConfig& cfg, std::ostream& csv, std::ostream& log);

// %.17g, with negative zero printed as 0.
std::string fmt(double x);

// Full front end: parses argv, runs one subcommand, writes the table to the
// configured output path (or out when none is set).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace afbm::cli

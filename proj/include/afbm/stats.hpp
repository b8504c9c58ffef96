#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace afbm {

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n)
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Mean and standard error with pairwise summation in index order. n >= 2.
MCEstimate mc_estimate(std::span<const double> samples, std::uint64_t seed);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// One row of a convergence experiment: the controlled parameter (N or eps),
// the Monte Carlo estimate of E sup |error| and its standard error.
struct RateRow {
    double param = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
};

struct RateTable {
    std::vector<RateRow> rows;
    bool has_slope = false;
    double slope = 0.0;
};

void fit_slope(RateTable& table);

}  // namespace afbm

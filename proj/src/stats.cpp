#include "afbm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "afbm/errors.hpp"
#include "afbm/parallel.hpp"

namespace afbm {

MCEstimate mc_estimate(std::span<const double> samples, std::uint64_t seed) {
    const std::size_t n = samples.size();
    if (n < 2) throw domain_error("mc_estimate: needs at least two samples");
    const double mean = pairwise_sum(samples) / double(n);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = (samples[i] - mean) * (samples[i] - mean);
    const double var = pairwise_sum(dev) / double(n - 1);
    return {mean, std::sqrt(var / double(n)), n, seed};
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw domain_error("loglog_slope: needs two or more matched points");
    // Sorted by x so the fit does not depend on input order, bit for bit.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }
    x = xs;
    y = ys;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) throw domain_error("loglog_slope: non-positive value");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

void fit_slope(RateTable& table) {
    table.has_slope = table.rows.size() >= 2;
    if (!table.has_slope) return;
    std::vector<double> x, y;
    for (const auto& r : table.rows) {
        x.push_back(r.param);
        y.push_back(r.estimate);
    }
    table.slope = loglog_slope(x, y);
}

}  // namespace afbm

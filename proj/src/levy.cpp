#include <algorithm>
#include <bit>
#include <cmath>

#include "afbm/eps_approx.hpp"
#include "afbm/parallel.hpp"
#include "afbm/philox.hpp"
#include "afbm/quadrature.hpp"
#include "afbm/rough_integrals.hpp"

namespace afbm {

namespace {

constexpr cplx I{0.0, 1.0};

double kappa_of(double alpha) { return ModelParams::make(alpha).kappa; }

double levy_const_raw(double a) {
    return a * (2.0 * a - 1.0) / 2.0 *
           (2.0 * gamma_fn(2.0 * a - 1.0) * gamma_fn(2.0 * a + 1.0) / gamma_fn(4.0 * a + 1.0) +
            1.0 / ((2.0 * a - 1.0) * (4.0 * a - 1.0)));
}

// Paths per Cholesky block product. Fixed so results do not depend on threads.
constexpr std::size_t mc_chunk = 32;

std::vector<double> dyadic_grid(double t, std::size_t grid_n, double min_eps) {
    if (!(t > 0.0)) throw domain_error("Levy Monte Carlo: t must be positive");
    if (grid_n < 2 || !std::has_single_bit(grid_n))
        throw domain_error("Levy Monte Carlo: grid_n must be a power of two");
    if (min_eps < 4.0 * t / double(grid_n))
        throw domain_error("Levy Monte Carlo: grid does not resolve eps (need eps >= 4 t / grid_n)");
    return uniform_grid(t, grid_n + 1);
}

// Calls per_path(cols) for every path, where cols[c] is component c of
// path r (one sampler per component), and collects the returned values.
template <class PerPath>
std::vector<double> mc_over_paths(const std::vector<const EpsSampler*>& samplers, std::size_t n_paths,
                                  std::uint64_t seed, unsigned threads, PerPath per_path) {
    const std::size_t n = samplers.front()->grid().size();
    const std::size_t dim = samplers.size();
    const std::size_t n_chunks = (n_paths + mc_chunk - 1) / mc_chunk;
    std::vector<double> out(n_paths);
    parallel_for(n_chunks, threads, [&](std::size_t chunk) {
        const std::size_t r0 = chunk * mc_chunk;
        const std::size_t m = std::min(mc_chunk, n_paths - r0);
        std::vector<std::vector<double>> blocks(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            std::vector<std::uint64_t> streams(m);
            for (std::size_t i = 0; i < m; ++i) streams[i] = rng::stream_id(r0 + i, unsigned(c));
            blocks[c] = samplers[c]->draw_block(seed, streams);
        }
        std::vector<std::span<const double>> cols(dim);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t c = 0; c < dim; ++c) cols[c] = std::span<const double>(blocks[c]).subspan(i * n, n);
            out[r0 + i] = per_path(cols);
        }
    });
    return out;
}

}  // namespace

double levy_area_variance(const LevyAreaSpec& spec) {
    if (!(spec.t > 0.0)) throw domain_error("levy_area_variance: t must be positive");
    if (!(spec.eps1 > 0.0 && spec.eps2 > 0.0))
        throw domain_error("levy_area_variance: eps1, eps2 must be positive");
    const double a2 = 2.0 * spec.alpha;
    const double kappa = kappa_of(spec.alpha);
    const double e1 = 2.0 * spec.eps1, e2 = 2.0 * spec.eps2;
    const double e2pow = std::pow(e2, a2);

    const double scale = std::pow(spec.t, 2.0 * a2);
    // Integrand Re k(x - y) Re J(x, y) is symmetric in (x, y); integrate y = x - r, r in [0, x].
    auto inner = [&](double x) {
        const cplx jx = std::pow(cplx(e2, -x), a2);
        auto f = [&](double r) {
            const double y = x - r;
            const cplx k = std::pow(cplx(e1, -r), a2 - 2.0);
            const cplx j = std::pow(cplx(e2, -r), a2) - jx - std::pow(cplx(e2, y), a2) + e2pow;
            return k.real() * j.real();
        };
        return quad::gauss_kronrod(f, 0.0, x, 1e-14 * scale / spec.t, 1e-12).value;
    };
    const double integral = quad::gauss_kronrod(inner, 0.0, spec.t, 1e-13 * scale, 1e-11).value;
    return 8.0 * kappa * kappa * integral / (a2 * (a2 - 1.0));
}

double levy_const(double alpha) {
    if (!(alpha > 0.25)) throw domain_error("levy_const: alpha must exceed 1/4");
    if (!(alpha < 1.0)) throw domain_error("levy_const: alpha must be below 1");
    if (std::abs(alpha - 0.5) < 1e-3) {
        // Cancelling pole pair at 1/2: symmetric averages, one Richardson step in h^2.
        constexpr double h = 2e-3;
        auto avg = [&](double d) { return 0.5 * (levy_const_raw(alpha + d) + levy_const_raw(alpha - d)); };
        return (4.0 * avg(0.5 * h) - avg(h)) / 3.0;
    }
    return levy_const_raw(alpha);
}

double area_path(std::span<const double> grid, std::span<const double> x1, std::span<const double> x2,
                 double s, double t) {
    if (x1.size() != grid.size() || x2.size() != grid.size())
        throw domain_error("area_path: paths and grid differ in length");
    auto index_of = [&](double v) {
        const auto it = std::lower_bound(grid.begin(), grid.end(), v);
        if (it == grid.end() || *it != v) throw domain_error("area_path: s and t must be grid points");
        return std::size_t(it - grid.begin());
    };
    const std::size_t is = index_of(s), it = index_of(t);
    if (it < is) throw domain_error("area_path: requires s <= t");
    const double base = x2[is];
    double area = 0.0;
    for (std::size_t i = is; i < it; ++i)
        area += 0.5 * ((x2[i] - base) + (x2[i + 1] - base)) * (x1[i + 1] - x1[i]);
    return area;
}

double volume_path(std::span<const double> x1, std::span<const double> x2, std::span<const double> x3) {
    if (x1.size() != x2.size() || x1.size() != x3.size())
        throw domain_error("volume_path: paths differ in length");
    double inner = 0.0, vol = 0.0;
    for (std::size_t i = 0; i + 1 < x1.size(); ++i) {
        const double next = inner + 0.5 * ((x3[i] - x3[0]) + (x3[i + 1] - x3[0])) * (x2[i + 1] - x2[i]);
        vol += 0.5 * (inner + next) * (x1[i + 1] - x1[i]);
        inner = next;
    }
    return vol;
}

MCEstimate mc_levy_area_moment(double alpha, double eps, double t, std::size_t n_paths, std::size_t grid_n,
                               std::uint64_t seed, unsigned threads, bool swap_components) {
    if (n_paths < 2) throw domain_error("mc_levy_area_moment: needs at least two paths");
    const auto p = ModelParams::make(alpha);
    const auto grid = dyadic_grid(t, grid_n, eps);
    const EpsSampler sampler({alpha, eps, grid}, p);
    const int a = swap_components ? 1 : 0;
    const auto sq = mc_over_paths({&sampler, &sampler}, n_paths, seed, threads, [&](const auto& cols) {
        const double area = area_path(grid, cols[a], cols[1 - a], 0.0, t);
        return area * area;
    });
    return mc_estimate(sq, seed);
}

MCEstimate mc_levy_volume_moment(double alpha, double eps1, double eps2, double eps3, double t,
                                 std::size_t n_paths, std::size_t grid_n, std::uint64_t seed,
                                 unsigned threads) {
    if (n_paths < 2) throw domain_error("mc_levy_volume_moment: needs at least two paths");
    const auto p = ModelParams::make(alpha);
    const auto grid = dyadic_grid(t, grid_n, std::min({eps1, eps2, eps3}));
    const EpsSampler s1({alpha, eps1, grid}, p);
    const EpsSampler s2({alpha, eps2, grid}, p);
    const EpsSampler s3({alpha, eps3, grid}, p);
    const auto sq = mc_over_paths({&s1, &s2, &s3}, n_paths, seed, threads, [&](const auto& cols) {
        const double v = volume_path(cols[0], cols[1], cols[2]);
        return v * v;
    });
    return mc_estimate(sq, seed);
}

double levy_area_eps_slope(double alpha, std::span<const double> eps_list, double t) {
    std::vector<double> v;
    for (double e : eps_list) v.push_back(levy_area_variance({alpha, t, e, e}));
    return loglog_slope(eps_list, v);
}

double divergence_slope(double alpha, std::span<const double> eps_list, double t) {
    if (!(alpha > 0.0 && alpha < 0.25)) throw domain_error("divergence_slope: requires 0 < alpha < 1/4");
    if (eps_list.size() < 4) throw domain_error("divergence_slope: needs at least four eps values");
    const bool down = std::adjacent_find(eps_list.begin(), eps_list.end(), std::less_equal<>()) == eps_list.end();
    const bool up = std::adjacent_find(eps_list.begin(), eps_list.end(), std::greater_equal<>()) == eps_list.end();
    if (!down && !up) throw domain_error("divergence_slope: eps list must be strictly monotone");
    return levy_area_eps_slope(alpha, eps_list, t);
}

cplx volume_inner_closed(double x2, double y2, int sigma3, double eps3, double alpha) {
    if (sigma3 != 1 && sigma3 != -1) throw domain_error("volume_inner_closed: sigma3 must be +1 or -1");
    if (!(eps3 > 0.0)) throw domain_error("volume_inner_closed: eps3 must be positive");
    const double a2 = 2.0 * alpha, e = 2.0 * eps3, sg = sigma3;
    const cplx v = std::pow(e, a2) - std::pow(-I * sg * x2 + e, a2) - std::pow(I * sg * y2 + e, a2) +
                   std::pow(-I * sg * (x2 - y2) + e, a2);
    return v / (a2 * (a2 - 1.0));
}

double levy_volume_w1(double alpha, double eps1, double eps2, double eps3, double t) {
    const double a2 = 2.0 * alpha;
    return 2.0 * kappa_of(alpha) * std::pow(2.0 * eps3, a2) / (a2 * (a2 - 1.0)) *
           levy_area_variance({alpha, t, eps1, eps2});
}

}  // namespace afbm

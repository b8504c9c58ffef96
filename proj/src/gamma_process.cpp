#include "afbm/gamma_process.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>

#include "afbm/parallel.hpp"
#include "afbm/philox.hpp"
#include "afbm/quadrature.hpp"

namespace afbm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

// Gauss-Legendre panel size and the largest change of k arg(zeta) per panel.
constexpr int panel_nodes = 32;
constexpr double panel_phase = 16.0;

// sqrt((2-2a+k)/(k+1)): ratio of consecutive Pochhammer prefactors.
std::vector<double> prefactor_ratios(std::size_t n, double alpha) {
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = std::sqrt((2.0 - 2.0 * alpha + k) / (k + 1.0));
    return r;
}

double leading_constant(const ModelParams& p) {
    return std::pow(2.0, p.alpha - 1.0) * std::sqrt(p.kappa);
}

// acc[k] += weight * f_k(z) for k < acc.size().
void accumulate_basis(cplx z, cplx weight, const ModelParams& p, const std::vector<double>& ratio,
                      std::span<cplx> acc) {
    const cplx zeta = (z - I) / (z + I);
    cplx f = weight * leading_constant(p) * principal_pow((z + I) / (2.0 * I), 2.0 * p.alpha - 2.0);
    const bool decaying = std::norm(zeta) < 1.0;
    for (std::size_t k = 0; k < acc.size(); ++k) {
        acc[k] += f;
        f *= zeta * ratio[k];
        if (decaying && std::abs(f.real()) + std::abs(f.imag()) < 1e-280) break;
    }
}

// acc[k] += integral of f_k over the straight segment za -> zb.
void integrate_segment(cplx za, cplx zb, const ModelParams& p, const std::vector<double>& ratio,
                       std::span<cplx> acc) {
    const double len = std::abs(zb - za);
    if (len == 0.0) return;
    const cplx dir = (zb - za) / len;
    const double n = std::max<double>(1.0, double(acc.size()));
    const auto& rule = quad::gauss_legendre(panel_nodes);

    // Largest admissible panel starting at z: resolves the phase of zeta^k and
    // the scale of (z + i)^{2a-2}.
    auto max_step = [&](cplx z) {
        const double rate = 2.0 * n / std::max(std::abs(z * z + 1.0), 0.05);
        return std::min(panel_phase / rate, 0.5 * std::abs(z + I));
    };

    double s = 0.0;
    while (s < len) {
        const cplx z0 = za + dir * s;
        double h = std::min(max_step(z0), len - s);
        h = std::min(h, std::max(max_step(z0 + dir * h), 0.5 * h));
        if (len - s - h < 1e-3 * h) h = len - s;
        const double mid = s + 0.5 * h;
        for (int q = 0; q < panel_nodes; ++q) {
            const cplx z = za + dir * (mid + 0.5 * h * rule.x[q]);
            accumulate_basis(z, dir * (0.5 * h * rule.w[q]), p, ratio, acc);
        }
        s += h;
    }
}

}  // namespace

ModelParams ModelParams::make(double alpha, double sigma_component) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("alpha must lie in (0, 1)");
    if (alpha == 0.5) throw domain_error("alpha = 1/2 is excluded (kappa is 0/0 there)");
    if (!(sigma_component > 0.0)) throw domain_error("sigma_component must be positive");
    ModelParams p;
    p.alpha = alpha;
    p.kappa = alpha * (1.0 - 2.0 * alpha) / (2.0 * std::cos(pi * alpha));
    p.sigma_component = sigma_component;
    p.near_half = std::abs(alpha - 0.5) < 1e-6;
    if (p.near_half)
        std::clog << "warning: alpha = " << alpha << " is within 1e-6 of 1/2; kappa is ill-conditioned\n";
    return p;
}

GaussianDraw GaussianDraw::make(std::uint64_t seed, std::size_t n_terms, const ModelParams& p,
                                std::uint64_t stream) {
    GaussianDraw d;
    d.seed = seed;
    d.stream = stream;
    d.n_terms = n_terms;
    d.xi_plus.resize(n_terms);
    const double sd = std::sqrt(p.sigma_component);
    for (std::size_t k = 0; k < n_terms; ++k) {
        const auto [x, y] = rng::normal_pair(seed, stream, k);
        d.xi_plus[k] = {sd * x, sd * y};
    }
    return d;
}

cplx cayley(cplx t) {
    if (t == -I) throw pole_error("cayley: pole at -i");
    return (t - I) / (t + I);
}

cplx cayley_inv(cplx z) {
    if (z == 1.0) throw pole_error("cayley_inv: pole at 1");
    return I * (1.0 + z) / (1.0 - z);
}

cplx f_k(std::size_t k, cplx z, const ModelParams& p) {
    if (z.imag() <= -1.0) throw domain_error("f_k: requires Im z > -1");
    const double pre = std::sqrt(std::exp(std::lgamma(2.0 - 2.0 * p.alpha + k) -
                                          std::lgamma(2.0 - 2.0 * p.alpha) - std::lgamma(k + 1.0)));
    const cplx zeta = (z - I) / (z + I);
    cplx zk = 1.0;
    if (k > 0) zk = zeta == 0.0 ? cplx(0.0) : std::pow(zeta, double(k));
    return leading_constant(p) * pre * principal_pow((z + I) / (2.0 * I), 2.0 * p.alpha - 2.0) * zk;
}

void f_all(cplx z, const ModelParams& p, std::span<cplx> out) {
    if (z.imag() <= -1.0) throw domain_error("f_all: requires Im z > -1");
    std::fill(out.begin(), out.end(), cplx(0.0));
    accumulate_basis(z, 1.0, p, prefactor_ratios(out.size(), p.alpha), out);
}

cplx kernel_partial_sum(cplx z, cplx w, std::size_t n, const ModelParams& p) {
    if (!(z.imag() > 0.0 && w.imag() > 0.0))
        throw domain_error("kernel_partial_sum: points must lie in the open upper half-plane");
    std::vector<cplx> fz(n), fw(n);
    f_all(z, p, fz);
    f_all(w, p, fw);
    cplx s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += fz[k] * std::conj(fw[k]);
    return s;
}

cplx kernel_closed(cplx z, cplx w, const ModelParams& p) {
    if (!(z.imag() > 0.0 && w.imag() > 0.0))
        throw domain_error("kernel_closed: points must lie in the open upper half-plane");
    return p.kappa * principal_pow(-I * (z - std::conj(w)), 2.0 * p.alpha - 2.0);
}

KernelApprox kernel_adaptive(cplx z, cplx w, const ModelParams& p, double tol) {
    if (!(z.imag() > 0.0 && w.imag() > 0.0))
        throw domain_error("kernel_adaptive: points must lie in the open upper half-plane");
    const cplx zz = cayley(z), zw = cayley(w);
    const double q = std::abs(zz) * std::abs(zw);
    const cplx gz = leading_constant(p) * principal_pow((z + I) / (2.0 * I), 2.0 * p.alpha - 2.0);
    const cplx gw = leading_constant(p) * principal_pow((w + I) / (2.0 * I), 2.0 * p.alpha - 2.0);
    cplx term = gz * std::conj(gw);
    cplx sum = 0.0;
    const cplx step = zz * std::conj(zw);
    for (std::size_t k = 0; k < 100000000; ++k) {
        sum += term;
        const double grow = (2.0 - 2.0 * p.alpha + k) / (k + 1.0);
        const double rho = q * std::max(1.0, grow);
        term *= step * grow;
        const double tail = rho < 1.0 ? std::abs(term) / (1.0 - rho) : INFINITY;
        if (tail <= tol) return {sum, k + 1, tail};
    }
    throw convergence_error("kernel_adaptive: no convergence");
}

BasisTable::BasisTable(std::vector<cplx> points, std::size_t n_terms, const ModelParams& p)
    : points_(std::move(points)), n_terms_(n_terms), data_(points_.size() * n_terms) {
    for (const cplx& z : points_)
        if (z.imag() < 0.0) throw domain_error("BasisTable: points must satisfy Im z >= 0");
    if (points_.empty() || n_terms_ == 0) return;
    const auto ratio = prefactor_ratios(n_terms_, p.alpha);

    const double y = points_.front().imag();
    const bool on_line = std::all_of(points_.begin(), points_.end(),
                                     [&](const cplx& z) { return z.imag() == y; });
    if (!on_line) {
        for (std::size_t j = 0; j < points_.size(); ++j) {
            std::span<cplx> acc(data_.data() + j * n_terms_, n_terms_);
            integrate_segment(0.0, points_[j], p, ratio, acc);
        }
        return;
    }

    // F_k(iy), then cumulative integration along Im z = y in both directions.
    std::vector<cplx> base(n_terms_, 0.0);
    integrate_segment(0.0, cplx(0.0, y), p, ratio, base);
    std::vector<std::size_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points_[a].real() < points_[b].real(); });
    auto walk = [&](auto first, auto last) {
        std::vector<cplx> acc = base;
        double x = 0.0;
        for (auto it = first; it != last; ++it) {
            const double xj = points_[*it].real();
            integrate_segment(cplx(x, y), cplx(xj, y), p, ratio, acc);
            x = xj;
            std::copy(acc.begin(), acc.end(), data_.begin() + *it * n_terms_);
        }
    };
    auto split = std::partition_point(order.begin(), order.end(),
                                      [&](std::size_t j) { return points_[j].real() < 0.0; });
    walk(split, order.end());
    walk(std::make_reverse_iterator(split), order.rend());
}

cplx F_k(std::size_t k, cplx z, const ModelParams& p) {
    BasisTable t({z}, k + 1, p);
    return t(0, k);
}

cplx cov_C(double s, double t, const ModelParams& p) {
    auto term = [&](double x) -> cplx {
        if (x == 0.0) return 0.0;
        const double sg = x > 0.0 ? 1.0 : -1.0;
        return std::exp(I * (pi * p.alpha * sg)) * std::pow(std::abs(x), 2.0 * p.alpha);
    };
    return (std::conj(term(s)) + term(t) - term(t - s)) / (4.0 * std::cos(pi * p.alpha));
}

std::vector<cplx> series_values(const BasisTable& table, const GaussianDraw& draw, std::size_t n) {
    if (n > table.n_terms() || n > draw.n_terms)
        throw domain_error("series_values: more terms requested than available");
    std::vector<cplx> out(table.n_points());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const auto row = table.row(j);
        cplx s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += row[k] * draw.xi_plus[k];
        out[j] = s;
    }
    return out;
}

ComplexPathSample sample_gamma_plus(const GaussianDraw& draw, std::span<const cplx> points,
                                    const ModelParams& p) {
    for (const cplx& z : points)
        if (z.imag() < 0.0) throw domain_error("sample_gamma_plus: point below the real axis");
    BasisTable table(std::vector<cplx>(points.begin(), points.end()), draw.n_terms, p);
    ComplexPathSample out;
    out.points.assign(points.begin(), points.end());
    out.values = series_values(table, draw, draw.n_terms);
    out.n_terms = draw.n_terms;
    return out;
}

PathSample sample_fbm_series(const GaussianDraw& draw, std::span<const double> grid,
                             const ModelParams& p) {
    std::vector<cplx> pts(grid.begin(), grid.end());
    const auto g = sample_gamma_plus(draw, pts, p);
    PathSample out;
    out.grid.assign(grid.begin(), grid.end());
    out.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] = 2.0 * g.values[j].real();
    out.n_terms = draw.n_terms;
    out.provenance = Provenance::series;
    return out;
}

std::vector<double> uniform_grid(double t_max, std::size_t n_points) {
    std::vector<double> g(n_points);
    for (std::size_t j = 0; j < n_points; ++j)
        g[j] = n_points == 1 ? t_max : t_max * double(j) / double(n_points - 1);
    return g;
}

RateTable series_error_experiment(const ModelParams& p, const std::vector<std::size_t>& n_list,
                                  std::size_t n_ref, std::size_t n_mc, std::uint64_t seed,
                                  std::size_t grid_n, double t_max, unsigned threads) {
    if (n_list.empty()) throw domain_error("series_error_experiment: empty N list");
    std::vector<std::size_t> ns = n_list;
    std::sort(ns.begin(), ns.end());
    if (ns.back() >= n_ref) throw domain_error("series_error_experiment: n_ref must exceed every N");
    if (n_mc < 1) throw domain_error("series_error_experiment: n_mc must be positive");

    const auto grid = uniform_grid(t_max, grid_n);
    BasisTable table(std::vector<cplx>(grid.begin(), grid.end()), n_ref, p);

    // sups[r * ns.size() + i] = sup_j |B^{ref}_j - B^{N_i}_j| for replicate r.
    std::vector<double> sups(n_mc * ns.size(), 0.0);
    parallel_for(n_mc, threads, [&](std::size_t r) {
        const auto draw = GaussianDraw::make(seed, n_ref, p, rng::stream_id(r, 0));
        std::vector<cplx> partial(ns.size());
        for (std::size_t j = 0; j < grid_n; ++j) {
            const auto row = table.row(j);
            cplx s = 0.0;
            std::size_t next = 0;
            for (std::size_t k = 0; k < n_ref; ++k) {
                while (next < ns.size() && ns[next] == k) partial[next++] = s;
                s += row[k] * draw.xi_plus[k];
            }
            for (std::size_t i = 0; i < ns.size(); ++i) {
                const double e = std::abs(2.0 * (s - partial[i]).real());
                sups[r * ns.size() + i] = std::max(sups[r * ns.size() + i], e);
            }
        }
    });

    RateTable out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::vector<double> col(n_mc);
        for (std::size_t r = 0; r < n_mc; ++r) col[r] = sups[r * ns.size() + i];
        const auto est = n_mc >= 2 ? mc_estimate(col, seed) : MCEstimate{col[0], 0.0, 1, seed};
        out.rows.push_back({double(ns[i]), est.mean, est.std_error});
    }
    fit_slope(out);
    return out;
}

}  // namespace afbm

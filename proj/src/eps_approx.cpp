#include "afbm/eps_approx.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "afbm/parallel.hpp"
#include "afbm/philox.hpp"
#include "afbm/quadrature.hpp"

namespace afbm {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr unsigned cholesky_purpose = 0xC4;

}  // namespace

cplx kernel_double_integral(cplx z, cplx w, const ModelParams& p) {
    const double a2 = 2.0 * p.alpha;
    const cplx wb = std::conj(w);
    return (principal_pow(-I * (z - wb), a2) - principal_pow(-I * z, a2) -
            principal_pow(I * wb, a2)) /
           (a2 * (a2 - 1.0));
}

double cov_points(cplx z, cplx w, const ModelParams& p) {
    if (z.imag() < 0.0 || w.imag() < 0.0)
        throw domain_error("cov_points: points must lie in the closed upper half-plane");
    return p.sigma_component * (p.kappa * kernel_double_integral(z, w, p)).real();
}

double cov_eps(double s, double eps1, double t, double eps2, const ModelParams& p) {
    if (eps1 < 0.0 || eps2 < 0.0) throw domain_error("cov_eps: eps must be non-negative");
    return 4.0 * cov_points(cplx(s, eps1), cplx(t, eps2), p);
}

CovarianceMatrix covariance_matrix(std::span<const double> grid, double eps, const ModelParams& p) {
    CovarianceMatrix m;
    m.n = grid.size();
    m.data.resize(m.n * m.n);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double c = cov_eps(grid[i], eps, grid[j], eps, p);
            m.data[i * m.n + j] = c;
            m.data[j * m.n + i] = c;
        }
    return m;
}

struct EpsSampler::Impl {
    std::vector<double> grid;
    std::vector<std::size_t> active;  // grid indices with positive variance
    Eigen::MatrixXd lower;
    bool jittered = false;
};

EpsSampler::EpsSampler(const EpsApproxSpec& spec, const ModelParams& p) : impl_(std::make_unique<Impl>()) {
    if (spec.eps < 0.0) throw domain_error("EpsSampler: eps must be non-negative");
    if (!std::is_sorted(spec.grid.begin(), spec.grid.end()) ||
        std::adjacent_find(spec.grid.begin(), spec.grid.end()) != spec.grid.end())
        throw domain_error("EpsSampler: grid must be sorted and distinct");
    impl_->grid = spec.grid;
    for (std::size_t j = 0; j < spec.grid.size(); ++j)
        if (cov_eps(spec.grid[j], spec.eps, spec.grid[j], spec.eps, p) != 0.0) impl_->active.push_back(j);

    const auto n = static_cast<Eigen::Index>(impl_->active.size());
    if (n == 0) return;
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double c = cov_eps(spec.grid[impl_->active[i]], spec.eps, spec.grid[impl_->active[j]],
                                     spec.eps, p);
            a(i, j) = c;
            a(j, i) = c;
        }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
        a.diagonal().array() += 1e-12 * a.trace() / double(n);
        llt.compute(a);
        impl_->jittered = true;
        if (llt.info() != Eigen::Success)
            throw domain_error("EpsSampler: covariance not positive definite after jitter");
    }
    impl_->lower = llt.matrixL();
}

EpsSampler::~EpsSampler() = default;
EpsSampler::EpsSampler(EpsSampler&&) noexcept = default;
EpsSampler& EpsSampler::operator=(EpsSampler&&) noexcept = default;

const std::vector<double>& EpsSampler::grid() const { return impl_->grid; }
bool EpsSampler::jittered() const { return impl_->jittered; }

std::vector<double> EpsSampler::draw_block(std::uint64_t seed,
                                           std::span<const std::uint64_t> streams) const {
    const std::size_t n = impl_->grid.size();
    const auto m = static_cast<Eigen::Index>(impl_->active.size());
    const auto cols = static_cast<Eigen::Index>(streams.size());
    std::vector<double> out(n * streams.size(), 0.0);
    if (m == 0 || cols == 0) return out;
    Eigen::MatrixXd z(m, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const std::uint64_t stream = streams[c] ^ (std::uint64_t(cholesky_purpose) << 56);
        for (Eigen::Index j = 0; j < m; j += 2) {
            const auto [x, y] = rng::normal_pair(seed, stream, std::uint64_t(j / 2));
            z(j, c) = x;
            if (j + 1 < m) z(j + 1, c) = y;
        }
    }
    const Eigen::MatrixXd x = impl_->lower.triangularView<Eigen::Lower>() * z;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index j = 0; j < m; ++j) out[c * n + impl_->active[j]] = x(j, c);
    return out;
}

PathSample EpsSampler::draw(std::uint64_t seed, std::uint64_t stream) const {
    const std::uint64_t s[1] = {stream};
    PathSample out;
    out.grid = impl_->grid;
    out.values = draw_block(seed, s);
    out.provenance = Provenance::cholesky;
    return out;
}

PathSample sample_gamma_eps_exact(std::uint64_t seed, const EpsApproxSpec& spec,
                                  const ModelParams& p) {
    return EpsSampler(spec, p).draw(seed);
}

double l2_error_law(double t, double eps, const ModelParams& p) {
    if (!(eps > 0.0)) throw domain_error("l2_error_law: eps must be positive");
    return cov_eps(t, eps, t, eps, p) - 2.0 * cov_eps(t, eps, t, 0.0, p) + cov_eps(t, 0.0, t, 0.0, p);
}

RateTable sup_error_experiment(const ModelParams& p, const std::vector<double>& eps_list,
                               std::size_t n_mc, std::size_t n_terms, std::uint64_t seed,
                               std::size_t grid_n, double t_max, unsigned threads) {
    if (eps_list.empty()) throw domain_error("sup_error_experiment: empty eps list");
    for (double e : eps_list)
        if (!(e > 0.0)) throw domain_error("sup_error_experiment: eps must be positive");
    if (n_mc < 1) throw domain_error("sup_error_experiment: n_mc must be positive");

    const auto grid = uniform_grid(t_max, grid_n);
    std::vector<BasisTable> tables;
    tables.emplace_back(std::vector<cplx>(grid.begin(), grid.end()), n_terms, p);
    for (double e : eps_list) {
        std::vector<cplx> pts;
        for (double t : grid) pts.emplace_back(t, e);
        tables.emplace_back(std::move(pts), n_terms, p);
    }

    const std::size_t ne = eps_list.size();
    std::vector<double> sups(n_mc * ne, 0.0);
    parallel_for(n_mc, threads, [&](std::size_t r) {
        const auto draw = GaussianDraw::make(seed, n_terms, p, rng::stream_id(r, 0));
        const auto base = series_values(tables[0], draw, n_terms);
        for (std::size_t i = 0; i < ne; ++i) {
            const auto shifted = series_values(tables[i + 1], draw, n_terms);
            double m = 0.0;
            for (std::size_t j = 0; j < grid_n; ++j)
                m = std::max(m, std::abs(2.0 * (base[j] - shifted[j]).real()));
            sups[r * ne + i] = m;
        }
    });

    RateTable out;
    for (std::size_t i = 0; i < ne; ++i) {
        std::vector<double> col(n_mc);
        for (std::size_t r = 0; r < n_mc; ++r) col[r] = sups[r * ne + i];
        const auto est = n_mc >= 2 ? mc_estimate(col, seed) : MCEstimate{col[0], 0.0, 1, seed};
        out.rows.push_back({eps_list[i], est.mean, est.std_error});
    }
    fit_slope(out);
    return out;
}

namespace {

struct Leg {
    cplx origin, direction;  // z(p) = origin + direction p, p in [0, 1]
};

// Both vertical legs start on the real axis so their self pieces share the
// same corner singularity at p = q = 0.
std::array<Leg, 3> contour_legs(double s, double t) {
    return {Leg{0.0, cplx(0.0, s)}, Leg{cplx(0.0, s), cplx(t, 0.0)}, Leg{cplx(t, 0.0), cplx(0.0, s)}};
}

constexpr double contour_rel_tol = 1e-13;

double smooth_piece(const Leg& a, const Leg& b, double expo, bool ridge) {
    const double speed = std::abs(a.direction) * std::abs(b.direction);
    auto outer = [&](double pa) {
        auto inner = [&](double pb) {
            const cplx d = a.origin + a.direction * pa - std::conj(b.origin + b.direction * pb);
            return std::pow(std::abs(d), expo);
        };
        std::vector<double> pts = {0.0, 1.0};
        if (ridge && pa > 0.0 && pa < 1.0) pts = {0.0, pa, 1.0};
        return quad::gauss_kronrod(inner, pts, 0.0, contour_rel_tol).value;
    };
    return speed * quad::gauss_kronrod(outer, 0.0, 1.0, 0.0, contour_rel_tol).value;
}

// Self piece of a vertical leg: |z - conj w| = s (p + q), singular at the corner.
// Duffy split of the unit square into two triangles, u radial, v angular.
double corner_piece(double s, double expo) {
    auto outer = [&](double u, double, double) {
        auto inner = [&](double v) { return 2.0 * std::pow(s * (1.0 + v), expo); };
        // u^{expo + 1} kept apart so tiny u does not overflow the kernel.
        return std::pow(u, expo + 1.0) * quad::gauss_kronrod(inner, 0.0, 1.0, 0.0, contour_rel_tol).value;
    };
    return s * s * quad::tanh_sinh(outer, 0.0, 1.0, 1e-12).value;
}

}  // namespace

ContourIntegral contour_kernel_integral(double s, double t, const ModelParams& p) {
    if (!(s > 0.0 && t > 0.0)) throw domain_error("contour_kernel_integral: s and t must be positive");
    const double expo = 2.0 * p.alpha - 2.0;
    const auto legs = contour_legs(s, t);
    ContourIntegral out;
    const double corner = corner_piece(s, expo);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j && i != 1)
                out.pieces[i][j] = corner;
            else if (j < i && !(i == 1 || j == 1))
                out.pieces[i][j] = out.pieces[j][i];
            else
                out.pieces[i][j] = smooth_piece(legs[i], legs[j], expo, i == 1 && j == 1);
        }
    for (const auto& row : out.pieces)
        for (double v : row) out.total += v;
    return out;
}

double contour_vertical_closed(double s, const ModelParams& p) {
    const double a2 = 2.0 * p.alpha;
    return (std::pow(2.0, a2) - 2.0) / (a2 * (a2 - 1.0)) * std::pow(s, a2);
}

double contour_piece_bound_sum(double s, double t, const ModelParams& p) {
    const double a2 = 2.0 * p.alpha;
    return 2.0 * contour_vertical_closed(s, p) + 4.0 * t * std::pow(s, a2 - 1.0) +
           2.0 * std::pow(t, a2 - 2.0) * s * s + std::pow(2.0, a2 - 2.0) * t * t * std::pow(s, a2 - 2.0);
}

double contour_max_expression(double s, double t, const ModelParams& p) {
    const double a2 = 2.0 * p.alpha;
    return std::max({std::pow(s, a2), t * std::pow(s, a2 - 1.0), std::pow(t, a2 - 2.0) * s * s,
                     t * t * std::pow(s, a2 - 2.0)});
}

}  // namespace afbm

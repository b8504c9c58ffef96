#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "afbm/gamma_process.hpp"

namespace afbm {

// Gamma(eps)_t = Gamma^+(t + i eps) + Gamma^-(t - i eps) = 2 Re Gamma^+(t + i eps).
struct EpsApproxSpec {
    double alpha = 0.0;
    double eps = 0.0;
    std::vector<double> grid;
};

// Row-major symmetric matrix.
struct CovarianceMatrix {
    std::size_t n = 0;
    std::vector<double> data;
    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

// Double integral of (-i(u - conj v))^{2a-2} over u in [0, z], v in [0, w].
cplx kernel_double_integral(cplx z, cplx w, const ModelParams& p);

// E[Re Gamma^+_z Re Gamma^+_w] for z, w in the closed upper half-plane.
double cov_points(cplx z, cplx w, const ModelParams& p);

// E[Gamma(eps1)_s Gamma(eps2)_t]; equals (|s|^{2a}+|t|^{2a}-|t-s|^{2a})/2 at eps = 0.
double cov_eps(double s, double eps1, double t, double eps2, const ModelParams& p);

CovarianceMatrix covariance_matrix(std::span<const double> grid, double eps, const ModelParams& p);

// Exact Gaussian sampler for Gamma(eps) on a fixed grid. The covariance is
// factorized once; eps = 0 gives the boundary FBM. Grid points of zero variance
// are pinned to 0.
class EpsSampler {
public:
    EpsSampler(const EpsApproxSpec& spec, const ModelParams& p);
    ~EpsSampler();
    EpsSampler(EpsSampler&&) noexcept;
    EpsSampler& operator=(EpsSampler&&) noexcept;

    const std::vector<double>& grid() const;
    bool jittered() const;

    PathSample draw(std::uint64_t seed, std::uint64_t stream = 0) const;
    // Paths for streams[0..m) as columns of an n x m column-major array.
    std::vector<double> draw_block(std::uint64_t seed, std::span<const std::uint64_t> streams) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

PathSample sample_gamma_eps_exact(std::uint64_t seed, const EpsApproxSpec& spec,
                                  const ModelParams& p);

// E|Gamma(eps)_t - Gamma_t|^2.
double l2_error_law(double t, double eps, const ModelParams& p);

// E sup_grid |Gamma_t - Gamma(eps)_t| for each eps, both processes driven by the
// same N-term draw per replicate.
RateTable sup_error_experiment(const ModelParams& p, const std::vector<double>& eps_list,
                               std::size_t n_mc, std::size_t n_terms, std::uint64_t seed,
                               std::size_t grid_n = 256, double t_max = 1.0, unsigned threads = 0);

// Nine pieces of the double integral of |z - conj w|^{2a-2} |dz| |dw| over the
// contour 0 -> is -> t + is -> t. Leg order: 0 left vertical, 1 horizontal,
// 2 right vertical; pieces[i][j] pairs leg i of z with leg j of w.
struct ContourIntegral {
    std::array<std::array<double, 3>, 3> pieces{};
    double total = 0.0;
};

ContourIntegral contour_kernel_integral(double s, double t, const ModelParams& p);

// (2^{2a} - 2) / (2a(2a - 1)) s^{2a}: value of each vertical-vertical self piece.
double contour_vertical_closed(double s, const ModelParams& p);

// Piecewise upper bounds: 2 vertical + 4 t s^{2a-1} + 2 t^{2a-2} s^2 + 2^{2a-2} t^2 s^{2a-2}.
double contour_piece_bound_sum(double s, double t, const ModelParams& p);

// max(s^{2a}, t s^{2a-1}, t^{2a-2} s^2, t^2 s^{2a-2}).
double contour_max_expression(double s, double t, const ModelParams& p);

}  // namespace afbm

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "afbm/specfun.hpp"
#include "afbm/stats.hpp"

namespace afbm {

// Parameters of
//   I1 = int_s^t (-i(u - a) + 2 eps1)^beta1 (-i(u - b) + 2 eps2)^beta2 du   (needs eps1 > eps2)
//   I2 = int_s^t ( i(u - a) + 2 eps1)^beta1 (-i(u - b) + 2 eps2)^beta2 du
// with principal powers. Re beta2 > -1 throughout.
struct PowerIntegralParams {
    double a = 0.0, b = 0.0;
    cplx beta1, beta2;
    double eps1 = 0.0, eps2 = 0.0;
    double s = 0.0, t = 0.0;
};

// Antiderivatives in u. F1 and Phi1 differ by a constant, as do F2 and Phi2.
cplx F1(const PowerIntegralParams& p, double u);
cplx Phi1(const PowerIntegralParams& p, double u);
cplx F2(const PowerIntegralParams& p, double u);
// Only for a = b = 0 and u > 0.
cplx Phi2(const PowerIntegralParams& p, double u);

cplx I1(const PowerIntegralParams& p);
cplx I1_phi(const PowerIntegralParams& p);
cplx I2(const PowerIntegralParams& p);
cplx I2_phi(const PowerIntegralParams& p);

struct LevyAreaSpec {
    double alpha = 0.0;
    double t = 1.0;
    double eps1 = 0.0, eps2 = 0.0;
};

// E[Area_{0,t}^2] for two independent components smoothed at eps1 (outer
// integrator) and eps2 (inner integrand). Absolute accuracy about 1e-9 t^{4a}.
double levy_area_variance(const LevyAreaSpec& spec);

// Limit of V(eps, eps)_1 as eps -> 0, for 1/4 < alpha < 1.
double levy_const(double alpha);

// Trapezoid discretization of int_s^t (X2_u - X2_s) dX1_u; s and t must be grid points.
double area_path(std::span<const double> grid, std::span<const double> x1,
                 std::span<const double> x2, double s, double t);

// int dX1 int dX2 int dX3 over the whole grid by nested cumulative trapezoid sums.
double volume_path(std::span<const double> x1, std::span<const double> x2,
                   std::span<const double> x3);

// Monte Carlo E[Area_{0,t}^2] over n_paths pairs of independent Gamma(eps)
// components on grid_n + 1 dyadic points. grid_n must be a power of two and
// eps >= 4 t / grid_n. swap_components integrates component 0 against 1 instead.
MCEstimate mc_levy_area_moment(double alpha, double eps, double t, std::size_t n_paths,
                               std::size_t grid_n, std::uint64_t seed, unsigned threads = 0,
                               bool swap_components = false);

MCEstimate mc_levy_volume_moment(double alpha, double eps1, double eps2, double eps3, double t,
                                 std::size_t n_paths, std::size_t grid_n, std::uint64_t seed,
                                 unsigned threads = 0);

// Least-squares slope of log V(eps, eps)_t against log eps.
double levy_area_eps_slope(double alpha, std::span<const double> eps_list, double t);
// The same fit restricted to 0 < alpha < 1/4, with >= 4 strictly decreasing eps.
double divergence_slope(double alpha, std::span<const double> eps_list, double t);

// int_0^x2 dx3 int_0^y2 dy3 (-i sigma3 (x3 - y3) + 2 eps3)^{2a-2}, closed form.
cplx volume_inner_closed(double x2, double y2, int sigma3, double eps3, double alpha);

// Sub-term of E[Vol^2] coming from the constant (2 eps3)^{2a} part of the inner
// closed form, including the kappa^3 prefactor and the sum over sigma3:
// 2 kappa (2 eps3)^{2a} / (2a(2a - 1)) V(eps1, eps2)_t.
double levy_volume_w1(double alpha, double eps1, double eps2, double eps3, double t);

// Truncated signature (levels 1..3) of the piecewise-linear interpolation of a
// d-dimensional path on 2^L + 1 equispaced points, for every dyadic block of
// every level n <= L.
class IteratedIntegralTable {
public:
    // points: n_points x dim, row-major.
    IteratedIntegralTable(std::span<const double> points, std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t max_level() const { return max_level_; }
    // Level-k tensor (size dim^k, row-major) over block l of level n.
    std::span<const double> block(std::size_t n, std::size_t l, int k) const;

private:
    std::size_t dim_ = 0;
    std::size_t max_level_ = 0;
    std::size_t stride_ = 0;  // dim + dim^2 + dim^3
    std::vector<std::vector<double>> levels_;
};

// (sum_l ||w^k_l - v^k_l||^{q/k})^{k/q} over the 2^n blocks of level n, Euclidean norm.
double dyadic_dk(const IteratedIntegralTable& w, const IteratedIntegralTable& v, double q, int k,
                 std::size_t n);

// [sum_{n=0}^{floor|log2 eps|} n^kappa 2^n (eps^a1 2^{-n a2})^{q/2}]^{2/q}.
double dyadic_delta(double kappa, double eps, double alpha1, double alpha2, double q);

// [sum_{n >= floor|log2 eta|} n^kappa sum_l ||w^d_l - v^d_l||^{q/d}]^{d/q}, the
// inner sum over all 2^n blocks; levels stop at the tables' depth or once a
// level contributes less than 1e-14 of the running total.
double dyadic_delta_prime(double kappa, int d, const IteratedIntegralTable& w,
                          const IteratedIntegralTable& v, double eta, double q);

}  // namespace afbm

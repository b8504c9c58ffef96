#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "afbm/specfun.hpp"
#include "afbm/stats.hpp"

namespace afbm {

// Hurst exponent and the constants derived from it. sigma_component is the
// variance of the real and imaginary parts of each xi_k^+; the default 1/2
// gives E|xi_k^+|^2 = 1 and Var B_1 = 1.
struct ModelParams {
    double alpha = 0.0;
    double kappa = 0.0;  // alpha (1 - 2 alpha) / (2 cos pi alpha)
    double sigma_component = 0.5;
    bool near_half = false;

    static ModelParams make(double alpha, double sigma_component = 0.5);
    // E[B_s B_t] = boundary_scale() * Re cov_C(s, t).
    double boundary_scale() const { return 4.0 * sigma_component; }
};

// xi_k^+ for k < n_terms. Coefficient k depends only on (seed, stream, k).
struct GaussianDraw {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::size_t n_terms = 0;
    std::vector<cplx> xi_plus;

    static GaussianDraw make(std::uint64_t seed, std::size_t n_terms, const ModelParams& p,
                             std::uint64_t stream = 0);
};

enum class Provenance { series, cholesky };

struct PathSample {
    std::vector<double> grid;
    std::vector<double> values;
    std::size_t n_terms = 0;
    Provenance provenance = Provenance::series;
};

struct ComplexPathSample {
    std::vector<cplx> points;
    std::vector<cplx> values;
    std::size_t n_terms = 0;
};

cplx cayley(cplx t);
cplx cayley_inv(cplx z);

cplx f_k(std::size_t k, cplx z, const ModelParams& p);
// f_0(z), ..., f_{n-1}(z) into out (size n).
void f_all(cplx z, const ModelParams& p, std::span<cplx> out);

cplx kernel_partial_sum(cplx z, cplx w, std::size_t n, const ModelParams& p);
cplx kernel_closed(cplx z, cplx w, const ModelParams& p);

struct KernelApprox {
    cplx value;
    std::size_t n_terms = 0;
    double tail_bound = 0.0;
};
// Partial sum with N chosen so a geometric bound on the tail is below tol.
KernelApprox kernel_adaptive(cplx z, cplx w, const ModelParams& p, double tol = 1e-12);

// F_k(z_j) = integral of f_k along the segment 0 -> z_j, for all k < n_terms.
// Points sharing one imaginary part are integrated cumulatively along that line.
class BasisTable {
public:
    BasisTable(std::vector<cplx> points, std::size_t n_terms, const ModelParams& p);

    std::size_t n_points() const { return points_.size(); }
    std::size_t n_terms() const { return n_terms_; }
    const std::vector<cplx>& points() const { return points_; }
    std::span<const cplx> row(std::size_t j) const {
        return {data_.data() + j * n_terms_, n_terms_};
    }
    cplx operator()(std::size_t j, std::size_t k) const { return data_[j * n_terms_ + k]; }

private:
    std::vector<cplx> points_;
    std::size_t n_terms_;
    std::vector<cplx> data_;
};

cplx F_k(std::size_t k, cplx z, const ModelParams& p);

// (e^{-i pi a sgn s}|s|^{2a} + e^{i pi a sgn t}|t|^{2a} - e^{i pi a sgn(t-s)}|t-s|^{2a}) / (4 cos pi a)
cplx cov_C(double s, double t, const ModelParams& p);

// sum_{k<n} F_k(z_j) xi_k^+ for every point of the table; n <= table and draw sizes.
std::vector<cplx> series_values(const BasisTable& table, const GaussianDraw& draw, std::size_t n);

PathSample sample_fbm_series(const GaussianDraw& draw, std::span<const double> grid,
                             const ModelParams& p);
ComplexPathSample sample_gamma_plus(const GaussianDraw& draw, std::span<const cplx> points,
                                    const ModelParams& p);

// E sup_grid |B^{n_ref} - B^N| over n_mc replicates, for each N in n_list, on
// grid_n equispaced points of [0, t_max]. Both paths share one draw per replicate.
RateTable series_error_experiment(const ModelParams& p, const std::vector<std::size_t>& n_list,
                                  std::size_t n_ref, std::size_t n_mc, std::uint64_t seed,
                                  std::size_t grid_n = 256, double t_max = 1.0,
                                  unsigned threads = 0);

std::vector<double> uniform_grid(double t_max, std::size_t n_points);

}  // namespace afbm

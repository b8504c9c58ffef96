#include <algorithm>
#include <bit>
#include <cmath>

#include "afbm/rough_integrals.hpp"

namespace afbm {

IteratedIntegralTable::IteratedIntegralTable(std::span<const double> points, std::size_t dim) : dim_(dim) {
    if (dim == 0 || points.size() % dim != 0) throw domain_error("IteratedIntegralTable: bad shape");
    const std::size_t n_points = points.size() / dim;
    const std::size_t n_seg = n_points - 1;
    if (n_points < 2 || !std::has_single_bit(n_seg))
        throw domain_error("IteratedIntegralTable: need 2^L + 1 points");
    max_level_ = std::size_t(std::countr_zero(n_seg));
    const std::size_t d = dim, d2 = d * d;
    stride_ = d + d2 + d2 * d;
    levels_.resize(max_level_ + 1);

    // A straight segment with increment x has signature (x, x⊗x/2, x⊗x⊗x/6).
    auto& fine = levels_[max_level_];
    fine.assign(n_seg * stride_, 0.0);
    for (std::size_t l = 0; l < n_seg; ++l) {
        double* s = fine.data() + l * stride_;
        for (std::size_t i = 0; i < d; ++i) s[i] = points[(l + 1) * d + i] - points[l * d + i];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                s[d + i * d + j] = s[i] * s[j] / 2.0;
                for (std::size_t k = 0; k < d; ++k) s[d + d2 + (i * d + j) * d + k] = s[i] * s[j] * s[k] / 6.0;
            }
    }
    // Chen: S(ab) = (a1 + b1, a2 + a1⊗b1 + b2, a3 + a2⊗b1 + a1⊗b2 + b3).
    for (std::size_t n = max_level_; n-- > 0;) {
        const auto& child = levels_[n + 1];
        auto& here = levels_[n];
        const std::size_t blocks = std::size_t(1) << n;
        here.assign(blocks * stride_, 0.0);
        for (std::size_t l = 0; l < blocks; ++l) {
            const double* a = child.data() + 2 * l * stride_;
            const double* b = a + stride_;
            double* s = here.data() + l * stride_;
            for (std::size_t i = 0; i < d; ++i) s[i] = a[i] + b[i];
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    const std::size_t ij = i * d + j;
                    s[d + ij] = a[d + ij] + a[i] * b[j] + b[d + ij];
                    for (std::size_t k = 0; k < d; ++k) {
                        const std::size_t ijk = ij * d + k;
                        s[d + d2 + ijk] = a[d + d2 + ijk] + a[d + ij] * b[k] + a[i] * b[d + j * d + k] +
                                          b[d + d2 + ijk];
                    }
                }
        }
    }
}

std::span<const double> IteratedIntegralTable::block(std::size_t n, std::size_t l, int k) const {
    if (n > max_level_) throw domain_error("IteratedIntegralTable: level not available");
    if (l >= (std::size_t(1) << n)) throw domain_error("IteratedIntegralTable: block out of range");
    if (k < 1 || k > 3) throw domain_error("IteratedIntegralTable: k must be 1, 2 or 3");
    const std::size_t d = dim_;
    const std::size_t offset = k == 1 ? 0 : k == 2 ? d : d + d * d;
    const std::size_t size = k == 1 ? d : k == 2 ? d * d : d * d * d;
    return std::span<const double>(levels_[n]).subspan(l * stride_ + offset, size);
}

namespace {

double level_sum(const IteratedIntegralTable& w, const IteratedIntegralTable& v, double q, int k,
                 std::size_t n) {
    if (w.dim() != v.dim()) throw domain_error("dyadic distance: tables differ in dimension");
    if (n > w.max_level() || n > v.max_level()) throw domain_error("dyadic distance: level not available");
    double total = 0.0;
    for (std::size_t l = 0; l < (std::size_t(1) << n); ++l) {
        const auto a = w.block(n, l, k), b = v.block(n, l, k);
        double sq = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
        total += std::pow(std::sqrt(sq), q / k);
    }
    return total;
}

}  // namespace

double dyadic_dk(const IteratedIntegralTable& w, const IteratedIntegralTable& v, double q, int k,
                 std::size_t n) {
    return std::pow(level_sum(w, v, q, k, n), k / q);
}

double dyadic_delta(double kappa, double eps, double alpha1, double alpha2, double q) {
    if (!(eps > 0.0 && kappa > 0.0 && alpha1 > 0.0 && q > 0.0))
        throw domain_error("dyadic_delta: kappa, eps, alpha1, q must be positive");
    const auto top = std::size_t(std::floor(std::abs(std::log2(eps))));
    double sum = 0.0;
    for (std::size_t n = 1; n <= top; ++n)  // n = 0 vanishes for kappa > 0
        sum += std::pow(double(n), kappa) * std::exp2(double(n)) *
               std::pow(std::pow(eps, alpha1) * std::exp2(-double(n) * alpha2), q / 2.0);
    return std::pow(sum, 2.0 / q);
}

double dyadic_delta_prime(double kappa, int d, const IteratedIntegralTable& w,
                          const IteratedIntegralTable& v, double eta, double q) {
    if (!(eta > 0.0 && kappa > 0.0 && q > 0.0)) throw domain_error("dyadic_delta_prime: bad parameters");
    const auto start = std::size_t(std::floor(std::abs(std::log2(eta))));
    const std::size_t depth = std::min(w.max_level(), v.max_level());
    if (start > depth) throw domain_error("dyadic_delta_prime: level not available");
    double total = 0.0;
    for (std::size_t n = start; n <= depth; ++n) {
        const double term = std::pow(double(n), kappa) * level_sum(w, v, q, d, n);
        total += term;
        if (term < 1e-14 * total) break;
    }
    return std::pow(total, double(d) / q);
}

}  // namespace afbm

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "afbm/errors.hpp"

namespace afbm::quad {

struct Rule {
    std::vector<double> x;  // nodes on [-1, 1], ascending
    std::vector<double> w;
};

// Gauss-Legendre rule, computed once per n and cached.
const Rule& gauss_legendre(int n);

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

template <class T, class F>
Piece<T> kronrod15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T fc = f(c);
    T k = fc * wgk[7];
    T g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const T f1 = f(c - h * xgk[j]);
        const T f2 = f(c + h * xgk[j]);
        k += (f1 + f2) * wgk[j];
        if (j % 2 == 1) g += (f1 + f2) * wg[j / 2];
    }
    using std::abs;
    return {a, b, k * h, abs(k * h - g * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15 over the union of [pts[i], pts[i+1]].
// Stops when the summed error estimate is below max(abs_tol, rel_tol |I|).
template <class F>
auto gauss_kronrod(F&& f, const std::vector<double>& pts, double abs_tol, double rel_tol,
                   int max_pieces = 4000) {
    using T = std::decay_t<decltype(f(pts.front()))>;
    using std::abs;
    std::priority_queue<detail::Piece<T>> heap;
    T total{};
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] == pts[i]) continue;
        auto p = detail::kronrod15<T>(f, pts[i], pts[i + 1]);
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int pieces = static_cast<int>(heap.size());
    while (!heap.empty() && err > std::max(abs_tol, rel_tol * abs(total))) {
        if (pieces >= max_pieces)
            throw convergence_error("gauss_kronrod: subdivision limit reached (error " +
                                    std::to_string(err) + ")");
        auto p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b)
            throw convergence_error("gauss_kronrod: interval below resolution");
        auto l = detail::kronrod15<T>(f, p.a, mid);
        auto r = detail::kronrod15<T>(f, mid, p.b);
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        ++pieces;
    }
    return Result<T>{total, err, 15 * pieces};
}

template <class F>
auto gauss_kronrod(F&& f, double a, double b, double abs_tol, double rel_tol,
                   int max_pieces = 4000) {
    return gauss_kronrod(std::forward<F>(f), std::vector<double>{a, b}, abs_tol, rel_tol,
                         max_pieces);
}

// Tanh-sinh quadrature on [a, b]. The integrand is called as f(x, x - a, b - x)
// with both distances computed without cancellation, so algebraic endpoint
// singularities can be evaluated accurately.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
               int max_level = 11) {
    using T = std::decay_t<decltype(f(a, 0.0, 0.0))>;
    using std::abs;
    constexpr double half_pi = 0.5 * std::numbers::pi;
    constexpr double t_max = 6.0;
    const double len = b - a;
    const double half = 0.5 * len;
    int evals = 0;

    auto node = [&](double t) -> T {
        const double u = half_pi * std::sinh(t);
        const double cu = std::cosh(u);
        const double w = half * half_pi * std::cosh(t) / (cu * cu);
        if (w == 0.0 || !std::isfinite(w)) return T{};
        const double dl = len / (1.0 + std::exp(-2.0 * u));
        const double dr = len / (1.0 + std::exp(2.0 * u));
        if (dl == 0.0 || dr == 0.0) return T{};
        ++evals;
        return f(a + dl, dl, dr) * w;
    };

    double h = 0.5;
    T sum = node(0.0);
    for (double t = h; t <= t_max; t += h) sum += node(t) + node(-t);
    T estimate = sum * h;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        T add{};
        for (double t = h; t <= t_max; t += 2.0 * h) add += node(t) + node(-t);
        sum += add;
        const T next = sum * h;
        const double diff = abs(next - estimate);
        estimate = next;
        if (level >= 3 && diff <= std::max(abs_tol, rel_tol * abs(next)))
            return Result<T>{estimate, diff, evals};
    }
    throw convergence_error("tanh_sinh: tolerance not reached");
}

}  // namespace afbm::quad

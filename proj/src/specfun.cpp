#include "afbm/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "afbm/quadrature.hpp"

namespace afbm {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int max_series_terms = 20000;
constexpr double series_tol = 1e-17;

bool is_nonpositive_integer(cplx x) {
    return x.imag() == 0.0 && x.real() <= 0.0 && x.real() == std::round(x.real());
}

bool near_integer(cplx x) {
    return std::abs(x.imag()) < 1e-10 && std::abs(x.real() - std::round(x.real())) < 1e-10;
}

// Lanczos-type approximation of log Gamma, Re z > 0 (g = 671/128, 14 terms).
constexpr std::array<double, 14> lanczos_cof = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

template <class T>
T lanczos_log_gamma(T z) {
    using std::log;
    T tmp = z + 5.24218750000000000;
    tmp = (z + 0.5) * log(tmp) - tmp;
    T ser = 0.999999999999997092;
    T y = z;
    for (double c : lanczos_cof) {
        y += 1.0;
        ser += c / y;
    }
    return tmp + log(2.5066282746310005 * ser / z);
}

}  // namespace

cplx principal_pow(cplx z, cplx beta) {
    if (z == cplx(0.0, 0.0)) {
        if (beta.real() > 0.0) return {0.0, 0.0};
        throw domain_error("principal_pow: 0 raised to a power with Re <= 0");
    }
    if (z.imag() == 0.0 && z.real() < 0.0)
        throw domain_error("principal_pow: base on the negative real axis");
    return std::exp(beta * std::log(z));
}

cplx gamma_fn(cplx z) {
    if (is_nonpositive_integer(z))
        throw pole_error("gamma_fn: pole at " + std::to_string(z.real()));
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_fn(1.0 - z));
    return std::exp(lanczos_log_gamma(z));
}

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::round(x))
        throw pole_error("gamma_fn: pole at " + std::to_string(x));
    if (x < 0.5) return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    return std::exp(lanczos_log_gamma(x));
}

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return {0.0, 0.0};
    return 1.0 / gamma_fn(z);
}

double pochhammer(double x, unsigned k) {
    if (k <= 64) {
        double p = 1.0;
        for (unsigned j = 0; j < k; ++j) p *= x + j;
        return p;
    }
    if (x <= 0.0 && x == std::round(x) && -x < k) return 0.0;
    double head = 1.0;
    unsigned m = 0;
    while (x + m <= 0.0) head *= x + m++;
    const double y = x + m;
    return head * std::exp(std::lgamma(y + (k - m)) - std::lgamma(y));
}

namespace detail {

cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z) {
    cplx term = 1.0, sum = 1.0;
    const double n_min = 6.0 * (std::abs(a) + std::abs(b) + std::abs(c) + 1.0);
    int small_run = 0;
    for (int n = 0; n < max_series_terms; ++n) {
        const double dn = n;
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        sum += term;
        if (term == cplx(0.0, 0.0)) return sum;
        if (dn > n_min && std::abs(term) <= series_tol * std::abs(sum)) {
            if (++small_run == 2) return sum;
        } else {
            small_run = 0;
        }
    }
    throw convergence_error("hyp2f1: power series did not converge");
}

cplx hyp2f1_inverse_z(cplx a, cplx b, cplx c, cplx z) {
    if (near_integer(b - a))
        throw degenerate_parameters("hyp2f1: b - a is an integer in the 1/z connection");
    const cplx w = 1.0 / z;
    const cplx gc = gamma_fn(c);
    const cplx t1 = gc * gamma_fn(b - a) * rgamma(b) * rgamma(c - a) * principal_pow(-z, -a) *
                    hyp2f1_series(a, a - c + 1.0, a - b + 1.0, w);
    const cplx t2 = gc * gamma_fn(a - b) * rgamma(a) * rgamma(c - b) * principal_pow(-z, -b) *
                    hyp2f1_series(b, b - c + 1.0, b - a + 1.0, w);
    return t1 + t2;
}

cplx hyp2f1_one_minus_z(cplx a, cplx b, cplx c, cplx z) {
    const cplx s = c - a - b;
    if (near_integer(s))
        throw degenerate_parameters("hyp2f1: c - a - b is an integer in the 1 - z connection");
    const cplx w = 1.0 - z;
    const cplx gc = gamma_fn(c);
    const cplx t1 =
        gc * gamma_fn(s) * rgamma(c - a) * rgamma(c - b) * hyp2f1_series(a, b, 1.0 - s, w);
    const cplx t2 = principal_pow(w, s) * gc * gamma_fn(-s) * rgamma(a) * rgamma(b) *
                    hyp2f1_series(c - a, c - b, s + 1.0, w);
    return t1 + t2;
}

// Integrates z(1-z)w'' + [c-(a+b+1)z]w' - ab w = 0 by Taylor steps of at most
// 0.4 times the distance to the nearest singular point {0, 1}.
cplx hyp2f1_continued(cplx a, cplx b, cplx c, cplx z) {
    cplx p;
    if (z.imag() == 0.0 || z.real() <= 0.5)
        p = 0.5 * z / std::abs(z);
    else
        p = cplx(0.0, z.imag() > 0.0 ? 0.5 : -0.5);
    cplx w = hyp2f1_series(a, b, c, p);
    cplx dw = a * b / c * hyp2f1_series(a + 1.0, b + 1.0, c + 1.0, p);

    for (int step = 0; step < 200; ++step) {
        cplx h = z - p;
        if (std::abs(h) == 0.0) return w;
        const double radius = std::min(std::abs(p), std::abs(1.0 - p));
        if (std::abs(h) > 0.4 * radius) h *= 0.4 * radius / std::abs(h);

        const cplx p0 = p * (1.0 - p);
        const cplx p1 = 1.0 - 2.0 * p;
        const cplx q0 = c - (a + b + 1.0) * p;
        cplx e0 = w, e1 = dw * h;
        cplx val = e0 + e1, der = e1;
        int small_run = 0;
        bool done = false;
        for (int n = 0; n < 4000; ++n) {
            const double dn = n;
            const cplx e2 = -((p1 * dn + q0) * (dn + 1.0) * e1 * h - (dn + a) * (dn + b) * e0 * h * h) /
                            (p0 * (dn + 1.0) * (dn + 2.0));
            val += e2;
            der += (dn + 2.0) * e2;
            e0 = e1;
            e1 = e2;
            if (std::abs(e2) <= series_tol * std::abs(val) && n > 4) {
                if (++small_run == 2) {
                    done = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if (!done) throw convergence_error("hyp2f1: Taylor continuation did not converge");
        w = val;
        dw = der / h;
        p += h;
    }
    throw convergence_error("hyp2f1: continuation path too long");
}

}  // namespace detail

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) {
    if (is_nonpositive_integer(c) && !(is_nonpositive_integer(a) && a.real() > c.real()) &&
        !(is_nonpositive_integer(b) && b.real() > c.real()))
        throw domain_error("hyp2f1: c is a non-positive integer");
    if (a == 0.0 || b == 0.0 || z == 0.0) return 1.0;
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
        return detail::hyp2f1_series(a, b, c, z);
    if (z.imag() == 0.0 && z.real() >= 1.0) {
        if (z.real() == 1.0 && (c - a - b).real() > 0.0)
            return gamma_fn(c) * gamma_fn(c - a - b) * rgamma(c - a) * rgamma(c - b);
        throw domain_error("hyp2f1: argument on the cut [1, inf)");
    }

    const double r = std::abs(z);
    const double r1 = std::abs(1.0 - z);
    if (r <= 0.7) return detail::hyp2f1_series(a, b, c, z);
    if (r1 <= 0.3) return detail::hyp2f1_one_minus_z(a, b, c, z);
    if (r >= 1.4) return detail::hyp2f1_inverse_z(a, b, c, z);

    const double best = std::min({r, 1.0 / r, r1});
    if (best <= 0.85) {
        try {
            if (best == r) return detail::hyp2f1_series(a, b, c, z);
            if (best == r1) return detail::hyp2f1_one_minus_z(a, b, c, z);
            return detail::hyp2f1_inverse_z(a, b, c, z);
        } catch (const degenerate_parameters&) {
        }
    }
    return detail::hyp2f1_continued(a, b, c, z);
}

cplx hyp2f1(const Hyp2F1Args& args) { return hyp2f1(args.a, args.b, args.c, args.z); }

cplx hyp2f1_euler(cplx a, cplx b, cplx c, cplx z) {
    if (!(b.real() > 0.0 && (c - b).real() > 0.0))
        throw domain_error("hyp2f1_euler: requires Re c > Re b > 0");
    if (z.imag() == 0.0 && z.real() >= 1.0) throw domain_error("hyp2f1_euler: z on the cut [1, inf)");
    auto f = [&](double x, double dl, double dr) {
        return principal_pow(dl, b - 1.0) * principal_pow(dr, c - b - 1.0) * principal_pow(1.0 - z * x, -a);
    };
    const cplx integral = quad::tanh_sinh(f, 0.0, 1.0, 1e-13, 0.0, 14).value;
    return integral * gamma_fn(c) * rgamma(b) * rgamma(c - b);
}

}  // namespace afbm

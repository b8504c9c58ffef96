#pragma once

#include <complex>

#include "afbm/errors.hpp"

namespace afbm {

using cplx = std::complex<double>;

// z^beta = exp(beta Log z), Im Log z in (-pi, pi]. Throws on the negative real
// axis and at z = 0 when Re beta <= 0; 0^beta = 0 otherwise.
cplx principal_pow(cplx z, cplx beta);

cplx gamma_fn(cplx z);
double gamma_fn(double x);

// 1/Gamma(z); zero at the poles.
cplx rgamma(cplx z);

// Rising factorial (x)_k. Product form for small k, log-Gamma ratio for large k.
double pochhammer(double x, unsigned k);

struct Hyp2F1Args {
    cplx a, b, c, z;
};

// Gauss hypergeometric function on the plane cut along [1, inf), plus the
// limit at z = 1 when Re(c - a - b) > 0.
//   |z| <= 0.7            power series
//   |1 - z| <= 0.3        1 - z connection
//   |z| >= 1.4            1 / z connection
//   otherwise             best converging of the three when its argument has
//                         modulus <= 0.85, else Taylor continuation of the
//                         hypergeometric ODE along a ray from |z| = 0.5
cplx hyp2f1(const Hyp2F1Args& args);
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);

// Euler integral Gamma(c) / (Gamma(b) Gamma(c - b)) int_0^1 x^{b-1} (1-x)^{c-b-1} (1-zx)^{-a} dx
// by tanh-sinh quadrature. A reference evaluator, independent of the dispatch
// above; needs Re c > Re b > 0 and z off [1, inf).
cplx hyp2f1_euler(cplx a, cplx b, cplx c, cplx z);

namespace detail {
// Raw pieces exposed for tests.
cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z);
cplx hyp2f1_inverse_z(cplx a, cplx b, cplx c, cplx z);
cplx hyp2f1_one_minus_z(cplx a, cplx b, cplx c, cplx z);
cplx hyp2f1_continued(cplx a, cplx b, cplx c, cplx z);
}  // namespace detail

}  // namespace afbm

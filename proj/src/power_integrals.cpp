#include <cmath>
#include <numbers>

#include "afbm/rough_integrals.hpp"

namespace afbm {

namespace {

constexpr cplx I{0.0, 1.0};

void check_common(const PowerIntegralParams& p) {
    if (!(p.eps1 > 0.0 && p.eps2 > 0.0)) throw domain_error("power integral: eps1, eps2 must be positive");
    if (!(p.beta2.real() > -1.0)) throw domain_error("power integral: Re beta2 must exceed -1");
}

void check_first(const PowerIntegralParams& p) {
    check_common(p);
    if (!(p.eps1 > p.eps2)) throw domain_error("I1 family: requires eps1 > eps2");
}

cplx shifted(const PowerIntegralParams& p, double u) { return 2.0 * p.eps2 - I * (u - p.b); }

}  // namespace

cplx F1(const PowerIntegralParams& p, double u) {
    check_first(p);
    const cplx A = shifted(p, u);
    const cplx D = 2.0 * (p.eps1 - p.eps2) - I * (p.b - p.a);
    const cplx e = p.beta2 + 1.0;
    return I * principal_pow(A, e) * principal_pow(D, p.beta1) / e *
           hyp2f1(-p.beta1, e, p.beta2 + 2.0, -A / D);
}

cplx Phi1(const PowerIntegralParams& p, double u) {
    check_first(p);
    const cplx A = shifted(p, u);
    const cplx D = 2.0 * (p.eps1 - p.eps2) - I * (p.b - p.a);
    const cplx m = p.beta1 + p.beta2 + 1.0;
    return I * principal_pow(A, m) / m * hyp2f1(-p.beta1, -m, 1.0 - m, -D / A);
}

cplx F2(const PowerIntegralParams& p, double u) {
    check_common(p);
    const cplx A = shifted(p, u);
    const cplx E = 2.0 * (p.eps1 + p.eps2) + I * (p.b - p.a);
    const cplx e = p.beta2 + 1.0;
    return I * principal_pow(A, e) * principal_pow(E, p.beta1) / e *
           hyp2f1(-p.beta1, e, p.beta2 + 2.0, A / E);
}

cplx Phi2(const PowerIntegralParams& p, double u) {
    check_common(p);
    if (p.a != 0.0 || p.b != 0.0 || !(u > 0.0))
        throw domain_error("Phi2: defined only for a = b = 0 and positive u");
    const cplx A = shifted(p, u);
    const cplx m = p.beta1 + p.beta2 + 1.0;
    const cplx phase = std::exp(I * std::numbers::pi * p.beta1);
    return I * phase * principal_pow(A, m) / m *
           hyp2f1(-p.beta1, -m, 1.0 - m, 2.0 * (p.eps1 + p.eps2) / A);
}

cplx I1(const PowerIntegralParams& p) {
    check_first(p);
    if (p.s == p.t) return {};
    return F1(p, p.t) - F1(p, p.s);
}

cplx I1_phi(const PowerIntegralParams& p) {
    check_first(p);
    if (p.s == p.t) return {};
    return Phi1(p, p.t) - Phi1(p, p.s);
}

cplx I2(const PowerIntegralParams& p) {
    check_common(p);
    if (p.s == p.t) return {};
    return F2(p, p.t) - F2(p, p.s);
}

cplx I2_phi(const PowerIntegralParams& p) {
    check_common(p);
    if (p.s == p.t) return {};
    return Phi2(p, p.t) - Phi2(p, p.s);
}

}  // namespace afbm

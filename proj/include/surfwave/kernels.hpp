#pragma once

#include <cmath>

#include "surfwave/util.hpp"

namespace surfwave {

namespace detail {

// All kernel denominators vanish only at removable points; 0/0 evaluates to 0.
inline double div0(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

// Closed form of the symmetrized interaction kernel. `sym_sign` multiplies the
// sigma term of the first bracket; it is 1 in production and -1 under the
// verify mutation hook (used to prove the equivalence suites can localize a
// single sign error).
inline double tilde_lambda_closed(double k, double l, double sigma, double sym_sign) {
    double ak = std::abs(k), al = std::abs(l), akl = std::abs(k + l);
    double d3 = akl + ak + al;
    double dl = akl + al;
    double dk = akl + ak;
    double first = 0.5 * (div0((k - l) * (ak * l - k * al), d3) - div0(k * l * al, dl) -
                          div0(ak * k * l, dk) +
                          sym_sign * sigma * (k * k + l * l + k * l - std::abs(k * l)));
    double second = 0.5 * sgn(k + l) *
                    (div0((ak - al) * (ak * l - k * al), d3) + div0(k * l * l, dl) +
                     div0(k * k * l, dk) - k * al - ak * l - sigma * (k + l) * (ak + al));
    return first + second;
}

} // namespace detail

// First-family kernel for the analytic-signal evolution, positive branch.
inline double lambda_plus(double k, double l, double sigma) {
    double ak = std::abs(k), al = std::abs(l), akl = std::abs(k - l);
    double d = akl + ak + al;
    double d2 = ak + al;
    return detail::div0(l * (akl * (akl - al) + (k - l) * al - akl * l), d) +
           detail::div0((k - l) * al * (al - l), d2) - (k - l) * al +
           sigma * (-k * al + 0.5 * ((k + l) * l - akl * al));
}

// First-family kernel, negative branch.
inline double lambda_minus(double k, double l, double sigma) {
    double ak = std::abs(k), al = std::abs(l), akl = std::abs(k - l);
    double d = akl + ak + al;
    double d2 = ak + al;
    return detail::div0(l * (akl * (akl - al) - (k - l) * al + akl * l), d) +
           detail::div0((k - l) * al * (al + l), d2) - (k - l) * al +
           sigma * (-k * al - 0.5 * ((k + l) * l - akl * al));
}

// Split of lambda_plus/lambda_minus into the two contributions that survive
// symmetrization. lambda01 + lambda02 equals lambda_plus for k > 0 and
// lambda_minus for k < 0.
inline double lambda01(double k, double l, double sigma) {
    double al = std::abs(l), akl = std::abs(k - l);
    double d = akl + std::abs(k) + al;
    double d2 = std::abs(k) + al;
    return sgn(k) * (detail::div0(l * ((k - l) * al - akl * l), d) -
                     detail::div0((k - l) * al * l, d2) +
                     0.5 * sigma * ((k + l) * l - akl * al));
}

inline double lambda02(double k, double l, double sigma) {
    double ak = std::abs(k), al = std::abs(l), akl = std::abs(k - l);
    double d = akl + ak + al;
    double d2 = ak + al;
    return detail::div0(l * akl * (akl - al), d) + detail::div0((k - l) * l * l, d2) -
           (k - l) * al - sigma * k * al;
}

// Shifted variants in output/input wavenumbers: lambda0i(k, l) equals
// sgn(k) * tilde_lambda0i(k - l, l).
inline double tilde_lambda01(double k, double l, double sigma) {
    double ak = std::abs(k), al = std::abs(l), akl = std::abs(k + l);
    return detail::div0(l * (k * al - ak * l), ak + akl + al) -
           detail::div0(k * l * al, akl + al) + 0.5 * sigma * ((k + 2 * l) * l - std::abs(k * l));
}

inline double tilde_lambda02(double k, double l, double sigma) {
    double ak = std::abs(k), al = std::abs(l), akl = std::abs(k + l);
    return sgn(k + l) * (detail::div0(ak * l * (ak - al), akl + ak + al) +
                         detail::div0(k * l * l, akl + al) - k * al - sigma * (k + l) * al);
}

// Symmetrized kernel, evaluated through its closed form. Equal to
// (tilde_lambda01 + tilde_lambda02 symmetrized over k <-> l) / 2.
inline double tilde_lambda_sym(double k, double l, double sigma) {
    return detail::tilde_lambda_closed(k, l, sigma, 1.0);
}

// Piecewise reduction of tilde_lambda_sym obtained from its symmetry
// (k <-> l) and reality ((k, l) -> (-k, -l)) relations.
inline double tilde_lambda_piecewise(double k, double l, double sigma) {
    if (k == 0.0 || l == 0.0 || k + l == 0.0) return 0.0;
    if (k > 0.0 && l > 0.0) return -(1.0 + sigma) * k * l;
    if (k + l > 0.0) {
        if (l < 0.0) return (1.0 + sigma) * l * (k + l);
        return (1.0 + sigma) * k * (k + l); // k < 0 branch by k <-> l symmetry
    }
    return tilde_lambda_piecewise(-k, -l, sigma); // reality for k + l < 0
}

// Sigma-independent canonical kernel; lambda_canonical(1, 1) = 1.
inline double lambda_canonical(double k, double l) {
    double ak = std::abs(k), al = std::abs(l), akl = std::abs(k + l);
    return detail::div0(2.0 * akl * ak * al, akl + ak + al);
}

// tilde_lambda_sym written through the canonical kernel.
inline double lambda_alternate(double k, double l, double sigma) {
    return -(1.0 + sigma) * lambda_canonical(k, l);
}

// Kernel of the noncanonical (half-derivative) variables. s_kernel(1, 1) =
// 1/sqrt(2) and |s_kernel(k, l)| <= min(|k|, |l|, |k + l|)^(1/2).
inline double s_kernel(double k, double l) {
    if (k == 0.0 || l == 0.0 || k + l == 0.0) return 0.0;
    return lambda_canonical(k, l) / std::sqrt(std::abs(k * l * (k + l)));
}

} // namespace surfwave

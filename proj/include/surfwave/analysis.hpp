#pragma once

#include <cmath>
#include <vector>

#include "surfwave/spectral.hpp"
#include "surfwave/util.hpp"

namespace surfwave {

// Sobolev exponents tracked by diagnostics plus the blow-up criterion exponent.
struct norm_ladder {
    std::vector<double> s_values{0.0, 2.5, 3.0};
    double s_prime = 2.5;

    void validate() const {
        if (!(s_prime > 2.0)) throw config_error("norms.s_prime must be > 2");
        for (double s : s_values)
            if (s < 0.0) throw config_error("norms.s_values must be >= 0");
    }
};

// Homogeneous norm (sum_{k != 0} |k|^{2s} |psi_hat|^2 dk)^{1/2}.
inline double homogeneous_norm(const spectral_grid& g, const std::vector<cplx>& c, double s) {
    if (s < 0.0) throw config_error("norm exponent must be >= 0");
    double acc = 0.0;
    for (std::size_t i = 1; i < g.n_modes; ++i) {
        double ak = std::abs(g.k[i]);
        if (ak == 0.0) continue;
        double w = s == 0.0 ? 1.0 : std::pow(ak, 2.0 * s);
        acc += w * std::norm(c[i]);
    }
    return std::sqrt(acc * g.dk);
}

// Inhomogeneous counterpart with weight 1 + |k|^{2s}.
inline double sobolev_norm(const spectral_grid& g, const std::vector<cplx>& c, double s) {
    double h0 = homogeneous_norm(g, c, 0.0);
    double hs = homogeneous_norm(g, c, s);
    return std::sqrt(h0 * h0 + hs * hs);
}

// Existence-time scaling product Q = ||psi0||_{L2}^{1-2/s} ||psi0||_{H^s}^{2/s};
// the local existence time is 1/(K_s Q) with K_s unknown, so only Q is reported.
inline double existence_time_scale(const spectral_grid& g, const std::vector<cplx>& psi0, double s) {
    if (!(s > 2.0)) throw config_error("existence_time_scale requires s > 2");
    double l2 = homogeneous_norm(g, psi0, 0.0);
    double hs = sobolev_norm(g, psi0, s);
    if (l2 == 0.0 && hs == 0.0) return 0.0;
    return std::pow(l2, 1.0 - 2.0 / s) * std::pow(hs, 2.0 / s);
}

// A-priori bound envelope ||psi0||_{H^s} (1 - (2 c/s) ||psi0||_{L2}^{1-2/s}
// ||psi0||_{H^s}^{2/s} |tau|)^{-s/2} for a user-supplied constant c (the
// product of the two Gronwall constants, which have no published values).
inline double apriori_envelope(double l2_0, double hs_0, double s, double c_const, double tau) {
    if (!(s > 2.0)) throw config_error("apriori_envelope requires s > 2");
    double q = hs_0 == 0.0 ? 0.0 : std::pow(l2_0, 1.0 - 2.0 / s) * std::pow(hs_0, 2.0 / s);
    double base = 1.0 - (2.0 * c_const / s) * q * std::abs(tau);
    if (!(base > 0.0)) throw precondition_error("apriori_envelope: past the envelope blow-up time");
    return hs_0 * std::pow(base, -s / 2.0);
}

inline double blowup_integrand(const spectral_grid& g, const std::vector<cplx>& psi, double s_prime) {
    if (!(s_prime > 2.0)) throw config_error("blow-up criterion exponent must be > 2");
    return std::pow(homogeneous_norm(g, psi, s_prime), 2.0 / s_prime);
}

// Running trapezoid value of int ||psi||_{s'}^{2/s'} dtau; finiteness of the
// limit is the continuation criterion.
struct blowup_accumulator {
    double value = 0.0;
    double prev = 0.0;
    bool primed = false;

    double update(double integrand, double d_tau) {
        if (primed) value += 0.5 * (prev + integrand) * d_tau;
        prev = integrand;
        primed = true;
        return value;
    }
};

// sum_{k != 0} |k|^{3/2} |psi_hat| dk, the L1 moment of the second blow-up
// criterion.
inline double l1_moment(const spectral_grid& g, const std::vector<cplx>& c) {
    double acc = 0.0;
    for (std::size_t i = 1; i < g.n_modes; ++i) {
        double ak = std::abs(g.k[i]);
        if (ak == 0.0) continue;
        acc += std::pow(ak, 1.5) * std::abs(c[i]);
    }
    return acc * g.dk;
}

struct interpolation_constants {
    double c_q = 0.0;
    double c_p = 0.0;
    double e_q = 0.0; // exponent on the low norm, (p - 1/2)/(p - q)
    double e_p = 0.0; // exponent on the high norm, (1/2 - q)/(p - q)
    double c_pq = 0.0;
};

inline interpolation_constants interpolation_constants_for(double p, double q) {
    if (!(q < 0.5 && 0.5 < p)) throw config_error("interpolation requires q < 1/2 < p");
    interpolation_constants k;
    k.c_q = std::sqrt(2.0 / (1.0 - 2.0 * q));
    k.c_p = std::sqrt(2.0 / (2.0 * p - 1.0));
    k.e_q = (p - 0.5) / (p - q);
    k.e_p = (0.5 - q) / (p - q);
    k.c_pq = 2.0 * std::pow(k.c_q, k.e_q) * std::pow(k.c_p, k.e_p);
    return k;
}

// Reference evaluation of the interpolation bound: minimize over the split
// point L the sum bound 2*max(C_q L^{1/2-q} a, C_p L^{1/2-p} b). The first
// term increases in L and the second decreases, so the minimum of the max is
// at the equalizer, found by bisection in log L. Must agree with the closed
// form c_pq * a^{e_q} * b^{e_p}.
inline double interpolation_rhs_numeric(double p, double q, double a, double b) {
    auto k = interpolation_constants_for(p, q);
    if (a <= 0.0 || b <= 0.0) return 0.0;
    auto diff = [&](double t) {
        double el = std::exp(t);
        return k.c_q * std::pow(el, 0.5 - q) * a - k.c_p * std::pow(el, 0.5 - p) * b;
    };
    double lo = -700.0, hi = 700.0;
    if (diff(lo) > 0.0 || diff(hi) < 0.0) throw error("interpolation equalizer not bracketed");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (diff(mid) < 0.0 ? lo : hi) = mid;
    }
    double el = std::exp(0.5 * (lo + hi));
    double t1 = k.c_q * std::pow(el, 0.5 - q) * a;
    double t2 = k.c_p * std::pow(el, 0.5 - p) * b;
    return 2.0 * std::max(t1, t2);
}

struct interpolation_result {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

// |l|^{3/2} moment against the two-norm interpolation bound with the explicit
// constant c_pq.
inline interpolation_result interpolation_check(const spectral_grid& g, const std::vector<cplx>& psi,
                                                double p, double q) {
    auto k = interpolation_constants_for(p, q);
    interpolation_result r;
    r.lhs = l1_moment(g, psi);
    double a = homogeneous_norm(g, psi, q + 1.5);
    double b = homogeneous_norm(g, psi, p + 1.5);
    r.rhs = (a == 0.0 && b == 0.0) ? 0.0 : k.c_pq * std::pow(a, k.e_q) * std::pow(b, k.e_p);
    r.pass = r.lhs <= r.rhs * (1.0 + 1e-10);
    return r;
}

} // namespace surfwave

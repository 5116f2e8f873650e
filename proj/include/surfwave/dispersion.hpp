#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "surfwave/util.hpp"

namespace surfwave {

// Background interface state: plasma tangential velocity v1, plasma magnetic
// field b1 (Alfven units), vacuum magnetic field h1, and nu = vbar/c.
struct physical_config {
    double v1 = 0.0;
    double b1 = 0.0;
    double h1 = 0.0;
    double nu = 0.0;

    void validate() const {
        if (!(nu > 0.0) || !std::isfinite(nu)) throw config_error("physical.nu must be finite and > 0");
        if (!std::isfinite(v1) || !std::isfinite(b1) || !std::isfinite(h1))
            throw config_error("physical fields must be finite");
    }
};

enum class regime { no_root, boundary_root, one_root, two_roots, double_root };

inline const char* regime_name(regime r) {
    switch (r) {
        case regime::no_root: return "NoRoot";
        case regime::boundary_root: return "BoundaryRoot";
        case regime::one_root: return "OneRoot";
        case regime::two_roots: return "TwoRoots";
        case regime::double_root: return "DoubleRoot";
    }
    return "?";
}

struct dispersion_root {
    double lambda = 0.0;
    double sigma = 0.0;   // sqrt(1 - nu^2 lambda^2)
    double d = 0.0;       // (lambda - v1)^2 - b1^2
    double rescale = std::numeric_limits<double>::quiet_NaN();
    regime tag = regime::no_root;
    bool usable = false;  // sigma > 0, d != 0, and a nondegenerate rescale factor
};

inline double sigma_of(double lambda, double nu) {
    double t = 1.0 - nu * nu * lambda * lambda;
    if (t < 0.0) {
        // Absorb boundary roundoff: evaluating at lambda = fl(1/nu) leaves up
        // to ~5 ulp of noise in t (three roundings here plus the caller's
        // division error entering squared).  Anything beyond the window is a
        // genuine domain error.
        if (t > -2e-15 * (1.0 + nu * nu * lambda * lambda)) return 0.0;
        throw precondition_error("sigma_of: nu*|lambda| exceeds 1");
    }
    return std::sqrt(t);
}

inline double dispersion_residual(double lambda, const physical_config& cfg) {
    double m = lambda - cfg.v1;
    return m * m - cfg.b1 * cfg.b1 - cfg.h1 * cfg.h1 * sigma_of(lambda, cfg.nu);
}

namespace detail {

inline constexpr int scan_samples = 4096;
inline constexpr double case_tol = 1e-12;

// Bracketed bisection refined by secant; assumes fa * fb < 0.
inline double refine_root(double a, double b, double fa, double fb, const physical_config& cfg) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        double fm = dispersion_residual(mid, cfg);
        if (fm == 0.0) return mid;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    double x0 = a, x1 = b, f0 = fa, f1 = fb;
    for (int it = 0; it < 4; ++it) {
        double denom = f1 - f0;
        if (denom == 0.0) break;
        double x2 = x1 - f1 * (x1 - x0) / denom;
        if (!(x2 > a - (b - a) && x2 < b + (b - a))) break;
        double f2 = dispersion_residual(x2, cfg);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (f2 == 0.0) break;
    }
    return std::abs(f1) <= std::abs(f0) ? x1 : x0;
}

// Global residual minimum on the open interval. The residual is strictly
// convex there (second derivative 2 + H^2 nu^2 / sigma^3 > 0), so a coarse
// scan plus golden-section refinement is exact.
inline double min_residual(const physical_config& cfg, double* arg_out) {
    double lim = 1.0 / cfg.nu;
    double lo = -lim + 1e-12 / cfg.nu;
    double hi = lim - 1e-12 / cfg.nu;
    int best = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scan_samples; ++i) {
        double x = lo + (hi - lo) * i / (scan_samples - 1);
        double f = dispersion_residual(x, cfg);
        if (f < fbest) {
            fbest = f;
            best = i;
        }
    }
    double a = lo + (hi - lo) * (best > 0 ? best - 1 : 0) / (scan_samples - 1);
    double b = lo + (hi - lo) * (best < scan_samples - 1 ? best + 1 : scan_samples - 1) / (scan_samples - 1);
    constexpr double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = dispersion_residual(x1, cfg), f2 = dispersion_residual(x2, cfg);
    for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = dispersion_residual(x1, cfg);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = dispersion_residual(x2, cfg);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = dispersion_residual(xm, cfg);
    if (f1 < fm) {
        fm = f1;
        xm = x1;
    }
    if (f2 < fm) {
        fm = f2;
        xm = x2;
    }
    if (arg_out) *arg_out = xm;
    return fm;
}

} // namespace detail

struct root_analysis {
    regime tag = regime::no_root;
    std::vector<dispersion_root> roots;
    // threshold |H| separating zero from two roots; NaN outside case 4
    double h_threshold = std::numeric_limits<double>::quiet_NaN();
};

// Rescale factor c = -(1 + sigma)/A with A = 2(lambda - v1)/d + nu^2 lambda / sigma^2.
// Substituting tau -> c*tau converts the raw amplitude equation to canonical form.
inline double time_rescale_factor(const dispersion_root& r, const physical_config& cfg) {
    if (!(r.sigma > 0.0) || r.d == 0.0)
        throw precondition_error("time_rescale_factor: root has sigma = 0 or d = 0");
    double a = 2.0 * (r.lambda - cfg.v1) / r.d + cfg.nu * cfg.nu * r.lambda / (r.sigma * r.sigma);
    if (std::abs(a) < 1e-12)
        throw precondition_error("time_rescale_factor: degenerate prefactor, |A| < 1e-12");
    return -(1.0 + r.sigma) / a;
}

// Threshold |H| at which the residual minimum touches zero (case 4 only:
// |B| < |v| - 1/nu). Found by bisection on |H|; the minimum is strictly
// decreasing in |H|.
inline double h_star(const physical_config& cfg) {
    cfg.validate();
    physical_config c = cfg;
    auto minres = [&c](double h) {
        c.h1 = h;
        return detail::min_residual(c, nullptr);
    };
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (minres(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 200) throw precondition_error("h_star: threshold search did not bracket");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (minres(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline root_analysis analyze_dispersion(const physical_config& cfg) {
    cfg.validate();
    root_analysis out;
    double lim = 1.0 / cfg.nu;
    double ab = std::abs(cfg.b1), av = std::abs(cfg.v1);
    double outer = av + lim, inner = av - lim;

    auto finish_root = [&](double lambda, regime tag) {
        dispersion_root r;
        r.lambda = lambda;
        r.sigma = sigma_of(lambda, cfg.nu);
        double m = lambda - cfg.v1;
        r.d = m * m - cfg.b1 * cfg.b1;
        r.tag = tag;
        r.usable = tag != regime::boundary_root && r.sigma > 0.0 && r.d != 0.0;
        if (r.usable) {
            double a = 2.0 * m / r.d + cfg.nu * cfg.nu * lambda / (r.sigma * r.sigma);
            if (std::abs(a) < 1e-12)
                r.usable = false;
            else
                r.rescale = -(1.0 + r.sigma) / a;
        }
        return r;
    };

    if (ab > outer + detail::case_tol) {
        out.tag = regime::no_root;
        return out;
    }
    if (std::abs(ab - outer) <= detail::case_tol) {
        out.tag = regime::boundary_root;
        if (cfg.v1 != 0.0) {
            out.roots.push_back(finish_root(-sgn(cfg.v1) * lim, regime::boundary_root));
        } else {
            out.roots.push_back(finish_root(-lim, regime::boundary_root));
            out.roots.push_back(finish_root(lim, regime::boundary_root));
        }
        return out;
    }

    bool case4 = ab < inner - detail::case_tol;
    if (case4) out.h_threshold = h_star(cfg);

    // interior sign-change scan
    double lo = -lim + 1e-12 / cfg.nu;
    double hi = lim - 1e-12 / cfg.nu;
    std::vector<double> found;
    double xprev = lo, fprev = dispersion_residual(lo, cfg);
    for (int i = 1; i < detail::scan_samples; ++i) {
        double x = lo + (hi - lo) * i / (detail::scan_samples - 1);
        double f = dispersion_residual(x, cfg);
        if (fprev == 0.0) {
            found.push_back(xprev);
        } else if ((fprev < 0.0) != (f < 0.0) && f != 0.0) {
            found.push_back(detail::refine_root(xprev, x, fprev, f, cfg));
        }
        xprev = x;
        fprev = f;
    }
    if (fprev == 0.0) found.push_back(xprev);

    if (found.empty()) {
        double argmin = 0.0;
        double fmin = detail::min_residual(cfg, &argmin);
        // At |H| = h_threshold the minimum is zero up to rounding noise of
        // either sign.  Inside that window the graze is one double root, not
        // a crossing pair a few ulps apart (nor a barely-missed approach), so
        // the tangency tag must not depend on the sign of the noise.
        double graze = 1e-12 * (argmin * argmin + cfg.b1 * cfg.b1 + cfg.h1 * cfg.h1);
        if (case4 && std::abs(fmin) <= graze) {
            out.tag = regime::double_root;
            out.roots.push_back(finish_root(argmin, regime::double_root));
            return out;
        }
        if (fmin < 0.0) {
            // crossing pair narrower than the scan spacing: bracket around the minimum
            double fl = dispersion_residual(lo, cfg), fh = dispersion_residual(hi, cfg);
            if (fl > 0.0) found.push_back(detail::refine_root(lo, argmin, fl, fmin, cfg));
            if (fh > 0.0) found.push_back(detail::refine_root(argmin, hi, fmin, fh, cfg));
        }
    }

    if (found.empty()) {
        out.tag = regime::no_root;
        return out;
    }
    out.tag = found.size() == 1 ? regime::one_root : regime::two_roots;
    for (double lam : found) out.roots.push_back(finish_root(lam, out.tag));
    return out;
}

inline std::vector<dispersion_root> find_roots(const physical_config& cfg) {
    return analyze_dispersion(cfg).roots;
}

} // namespace surfwave

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "surfwave/analysis.hpp"
#include "surfwave/kernels.hpp"
#include "surfwave/manifest.hpp"
#include "surfwave/profiles.hpp"
#include "surfwave/solver.hpp"
#include "surfwave/spectral.hpp"
#include "surfwave/util.hpp"

namespace surfwave {

// Optional fault injection for exercising failure localization: the flipped
// symmetrized kernel is substituted inside the symmetrization suite only, so a
// deliberate sign error shows up as exactly one failing table row.
enum class mutation { none, flip_sym_sign };

struct verify_row {
    std::string name;
    std::size_t samples = 0;
    double max_abs_err = 0.0;
    bool pass = false;
};

struct verify_report {
    std::vector<verify_row> rows;

    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
    void append(const verify_report& other) {
        rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    }
    std::string tsv() const {
        std::string out = "name\tsamples\tmax_abs_err\tpass\n";
        for (const auto& r : rows) {
            out += r.name;
            out += '\t';
            out += std::to_string(r.samples);
            out += '\t';
            out += fmt_double(r.max_abs_err);
            out += '\t';
            out += r.pass ? "PASS" : "FAIL";
            out += '\n';
        }
        return out;
    }
};

namespace detail {

struct uniform_source {
    std::mt19937_64 eng;
    explicit uniform_source(std::uint64_t seed) : eng(seed) {}
    double unit() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

inline verify_row make_row(std::string name, std::size_t samples, double err, double tol) {
    return verify_row{std::move(name), samples, err, err <= tol};
}

} // namespace detail

// --- kernel identity suite ----------------------------------------------------

inline verify_report kernel_identity_suite(std::size_t samples, std::uint64_t seed) {
    detail::uniform_source rng(seed);
    const double tol = 1e-12;
    const std::array<double, 3> alphas{0.5, 2.0, 10.0};

    double e_sym = 0, e_real = 0, e_hom = 0, e_ham = 0;
    double s_sym = 0, s_real = 0, s_hom = 0, s_ham = 0, s_bnd = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        double k = rng.range(-1.0, 1.0);
        double l = rng.range(-1.0, 1.0);
        // mix in degenerate patterns so the removable cases stay covered
        switch (i % 16) {
        case 7: l = -k; break;
        case 11: l = k; break;
        case 13: k = 0.0; break;
        case 15: l = 0.0; break;
        default: break;
        }
        const double lam = lambda_canonical(k, l);
        const double s = s_kernel(k, l);
        e_sym = std::max(e_sym, std::abs(lam - lambda_canonical(l, k)));
        e_real = std::max(e_real, std::abs(lam - lambda_canonical(-k, -l)));
        e_ham = std::max(e_ham, std::abs(lambda_canonical(k + l, -l) - lam));
        s_sym = std::max(s_sym, std::abs(s - s_kernel(l, k)));
        s_real = std::max(s_real, std::abs(s - s_kernel(-k, -l)));
        s_ham = std::max(s_ham, std::abs(s_kernel(k + l, -l) - s));
        for (double a : alphas) {
            e_hom = std::max(e_hom, std::abs(lambda_canonical(a * k, a * l) - a * a * lam));
            s_hom = std::max(s_hom, std::abs(s_kernel(a * k, a * l) - std::sqrt(a) * s));
        }
        // |S(k-l, l)| <= min(|k|, |k-l|, |l|)^{1/2}
        const double sb = std::abs(s_kernel(k - l, l));
        const double cap = std::sqrt(std::min({std::abs(k), std::abs(k - l), std::abs(l)}));
        s_bnd = std::max(s_bnd, sb - cap);
    }

    verify_report rep;
    rep.rows.push_back(detail::make_row("lambda-symmetry", samples, e_sym, tol));
    rep.rows.push_back(detail::make_row("lambda-reality", samples, e_real, tol));
    rep.rows.push_back(detail::make_row("lambda-homogeneity", samples, e_hom, tol));
    rep.rows.push_back(detail::make_row("lambda-hamiltonian", samples, e_ham, tol));
    rep.rows.push_back(detail::make_row("s-symmetry", samples, s_sym, tol));
    rep.rows.push_back(detail::make_row("s-reality", samples, s_real, tol));
    rep.rows.push_back(detail::make_row("s-homogeneity", samples, s_hom, tol));
    rep.rows.push_back(detail::make_row("s-hamiltonian", samples, s_ham, tol));
    rep.rows.push_back(detail::make_row("s-upper-bound", samples, std::max(0.0, s_bnd), tol));
    return rep;
}

// --- representation equivalence suite -----------------------------------------

inline verify_report representation_suite(std::size_t samples, const std::vector<double>& sigmas,
                                          std::uint64_t seed) {
    detail::uniform_source rng(seed);
    const double tol = 1e-12;

    double e_cp = 0, e_ca = 0, e_pa = 0, e_dec = 0, e_fac = 0;
    std::size_t total = 0;
    for (double sigma : sigmas) {
        for (std::size_t i = 0; i < samples; ++i) {
            double k = rng.range(-2.0, 2.0);
            double l = rng.range(-2.0, 2.0);
            switch (i % 16) {
            case 7: l = -k; break;
            case 11: l = k; break;
            case 13: k = 0.0; break;
            case 15: l = 0.0; break;
            default: break;
            }
            ++total;
            const double closed = tilde_lambda_sym(k, l, sigma);
            const double piece = tilde_lambda_piecewise(k, l, sigma);
            const double alt = lambda_alternate(k, l, sigma);
            e_cp = std::max(e_cp, std::abs(closed - piece));
            e_ca = std::max(e_ca, std::abs(closed - alt));
            e_pa = std::max(e_pa, std::abs(piece - alt));
            // one-sided decomposition: lambda01 + lambda02 recovers the raw kernel
            const double l01 = lambda01(k, l, sigma);
            const double l02 = lambda02(k, l, sigma);
            if (k > 0.0)
                e_dec = std::max(e_dec, std::abs(l01 + l02 - lambda_plus(k, l, sigma)));
            else if (k < 0.0)
                e_dec = std::max(e_dec, std::abs(l01 + l02 - lambda_minus(k, l, sigma)));
            // shifted-argument factorization of the one-sided pieces
            const double sg = sgn(k);
            e_fac = std::max(e_fac, std::abs(l01 - sg * tilde_lambda01(k - l, l, sigma)));
            e_fac = std::max(e_fac, std::abs(l02 - sg * tilde_lambda02(k - l, l, sigma)));
        }
    }

    verify_report rep;
    rep.rows.push_back(detail::make_row("closed-vs-piecewise", total, e_cp, tol));
    rep.rows.push_back(detail::make_row("closed-vs-alternate", total, e_ca, tol));
    rep.rows.push_back(detail::make_row("piecewise-vs-alternate", total, e_pa, tol));
    rep.rows.push_back(detail::make_row("one-sided-decomposition", total, e_dec, tol));
    rep.rows.push_back(detail::make_row("shift-factorization", total, e_fac, tol));
    return rep;
}

// --- symmetrization suite -------------------------------------------------------

namespace detail {

// Smooth compactly-supported Hermitian test profile on |xi| <= b:
//   phi(xi) = (1 - (xi/b)^2)^4 * (even poly + i * odd poly).
// Polynomial windows keep the quadrature integrand cheap and C^3 at the
// support edges, so composite trapezoid error is dominated by the interior
// kernel kinks (panels are split there).
struct band_profile {
    double b = 4.0;
    std::array<double, 3> pe{};
    std::array<double, 2> qo{};

    static band_profile random(uniform_source& rng) {
        band_profile p;
        p.b = rng.range(2.0, 6.0);
        for (auto& c : p.pe) c = rng.range(-1.0, 1.0);
        for (auto& c : p.qo) c = rng.range(-1.0, 1.0);
        return p;
    }

    cplx operator()(double xi) const {
        const double u = xi / b;
        const double w2 = 1.0 - u * u;
        if (w2 <= 0.0) return {0.0, 0.0};
        const double w4 = w2 * w2;
        const double win = w4 * w4;
        const double x2 = xi * xi;
        const double re = pe[0] + x2 * (pe[1] + x2 * pe[2]);
        const double im = xi * (qo[0] + x2 * qo[1]);
        return {win * re, win * im};
    }
};

// Composite trapezoid of f over [lo, hi] split at the interior kernel kinks,
// 2^14 intervals per panel. Returns (value, l1) where l1 integrates |f|.
template <typename F>
std::pair<cplx, double> kink_split_trapezoid(double lo, double hi, std::initializer_list<double> kinks,
                                             F&& f) {
    std::vector<double> edges{lo};
    for (double x : kinks)
        if (x > lo && x < hi) edges.push_back(x);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());

    constexpr std::size_t n_intervals = 1u << 14;
    cplx total{0.0, 0.0};
    double l1 = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], c = edges[p + 1];
        const double h = (c - a) / static_cast<double>(n_intervals);
        cplx acc = 0.5 * (f(a) + f(c));
        double acc1 = 0.5 * (std::abs(f(a)) + std::abs(f(c)));
        for (std::size_t i = 1; i < n_intervals; ++i) {
            const cplx v = f(a + h * static_cast<double>(i));
            acc += v;
            acc1 += std::abs(v);
        }
        total += acc * h;
        l1 += acc1 * h;
    }
    return {total, l1};
}

} // namespace detail

// The one-sided raw kernels and the symmetrized kernel must produce the same
// convolution against any Hermitian profile: the antisymmetric remainder
// integrates to zero. Checked by quadrature; relative error is measured
// against the L1 size of the integrand (the integral itself can vanish by
// symmetry, so it is not a usable scale).
inline verify_report symmetrization_suite(std::size_t n_profiles, std::size_t n_wavenumbers,
                                          const std::vector<double>& sigmas, std::uint64_t seed,
                                          mutation mut = mutation::none) {
    detail::uniform_source rng(seed);
    const double tol = 1e-8;
    const double sym_sign = (mut == mutation::flip_sym_sign) ? -1.0 : 1.0;

    double err_pos = 0.0, err_neg = 0.0;
    std::size_t count_pos = 0, count_neg = 0;
    for (std::size_t ip = 0; ip < n_profiles; ++ip) {
        const auto prof = detail::band_profile::random(rng);
        const double sigma = sigmas[ip % sigmas.size()];
        const double b = prof.b;
        for (std::size_t ik = 0; ik < n_wavenumbers; ++ik) {
            const double kpos = b * (0.15 + 1.55 * (static_cast<double>(ik) + 0.5) /
                                                static_cast<double>(n_wavenumbers));
            for (double k : {kpos, -kpos}) {
                const double lo = std::max(-b, k - b);
                const double hi = std::min(b, k + b);
                if (hi <= lo) continue;
                auto raw = [&](double l) -> cplx {
                    const double lam = (k > 0.0) ? lambda_plus(k, l, sigma) : lambda_minus(k, l, sigma);
                    return lam * prof(k - l) * prof(l);
                };
                auto symd = [&](double l) -> cplx {
                    const double lam =
                        sgn(k) * detail::tilde_lambda_closed(k - l, l, sigma, sym_sign);
                    return lam * prof(k - l) * prof(l);
                };
                auto [lhs, l1] = detail::kink_split_trapezoid(lo, hi, {0.0, k}, raw);
                auto [rhs, l1b] = detail::kink_split_trapezoid(lo, hi, {0.0, k}, symd);
                const double scale = std::max({std::abs(lhs), std::abs(rhs), l1, l1b});
                const double rel = (scale > 0.0) ? std::abs(lhs - rhs) / scale : 0.0;
                if (k > 0.0) {
                    err_pos = std::max(err_pos, rel);
                    ++count_pos;
                } else {
                    err_neg = std::max(err_neg, rel);
                    ++count_neg;
                }
            }
        }
    }

    verify_report rep;
    rep.rows.push_back(detail::make_row("symmetrization-pos", count_pos, err_pos, tol));
    rep.rows.push_back(detail::make_row("symmetrization-neg", count_neg, err_neg, tol));
    return rep;
}

// --- cross-formulation suite ----------------------------------------------------

// All four right-hand-side paths must produce the same time derivative of the
// displacement coefficients on random band-limited states.
inline verify_report cross_formulation_suite(std::uint64_t seed) {
    const double tol = 1e-10;
    const spectral_grid g(64, 2.0 * pi);
    gaussian_source gauss(seed);

    double worst = 0.0;
    const std::size_t n_states = 10;
    for (std::size_t s = 0; s < n_states; ++s) {
        std::vector<cplx> phi(g.n_modes, cplx{0, 0});
        const long half = static_cast<long>(g.n_modes) / 2;
        for (long j = 1; j < half; ++j) {
            if (j > 20) break;
            const cplx c{0.02 * gauss.normal(), 0.02 * gauss.normal()};
            phi[g.slot(j)] = c;
            phi[g.slot(-j)] = std::conj(c);
        }
        const auto r_spec = rhs_spectral_convolution(g, phi);
        const auto r_hil = rhs_spatial(g, phi, spatial_variant::hilbert_square);
        const auto r_com = rhs_spatial(g, phi, spatial_variant::commutator);
        const auto psi = phi_to_psi(g, phi);
        const auto r_non = rhs_noncanonical(g, psi);

        double scale = 0.0;
        for (const cplx& v : r_spec) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) scale = 1.0;
        for (std::size_t i = 0; i < g.n_modes; ++i) {
            worst = std::max(worst, std::abs(r_spec[i] - r_hil[i]) / scale);
            worst = std::max(worst, std::abs(r_spec[i] - r_com[i]) / scale);
            // dpsi/dtau = |k|^{1/2} dphi/dtau mode by mode
            const double ak = std::abs(g.k[i]);
            if (ak > 0.0)
                worst = std::max(worst, std::abs(r_non[i] / std::sqrt(ak) - r_spec[i]) / scale);
            else
                worst = std::max(worst, std::abs(r_non[i]) / scale);
        }
    }

    verify_report rep;
    rep.rows.push_back(detail::make_row("cross-formulation-rhs", n_states, worst, tol));
    return rep;
}

// --- conservation suite -----------------------------------------------------------

inline verify_report conservation_suite(std::uint64_t seed) {
    verify_report rep;

    // cyclic cancellation of the conserved-quantity triple sum
    {
        const spectral_grid g(64, 2.0 * pi);
        gaussian_source gauss(seed);
        double worst = 0.0;
        const std::size_t n_states = 50;
        for (std::size_t s = 0; s < n_states; ++s) {
            std::vector<cplx> psi(g.n_modes, cplx{0, 0});
            const long half = static_cast<long>(g.n_modes) / 2;
            for (long j = 1; j < half; ++j) {
                const cplx c{gauss.normal(), gauss.normal()};
                psi[g.slot(j)] = c;
                psi[g.slot(-j)] = std::conj(c);
            }
            worst = std::max(worst, cyclic_cancellation_residual(g, psi));
        }
        rep.rows.push_back(detail::make_row("cyclic-cancellation", n_states, worst, 1e-10));
    }

    // conserved L2 of the half-derivative variable over a short integration
    {
        const spectral_grid g(64, 2.0 * pi);
        profile_config pc;
        pc.kind = profile_kind::cosine;
        pc.amplitude = 0.05;
        pc.mode = 1;
        amplitude_state st = make_profile(g, pc, 0);
        solver_config sc;
        sc.form = formulation::spatial_hilbert;
        sc.t_end = 1.0;
        norm_ladder nl;
        auto rec = run(g, st, sc, nl, {});
        rep.rows.push_back(detail::make_row("l2-conservation", rec.steps, rec.final_drift, 1e-10));
    }
    return rep;
}

// --- interpolation suite -------------------------------------------------------------

inline verify_report interpolation_suite(std::uint64_t seed) {
    verify_report rep;
    const std::array<std::pair<double, double>, 3> pairs{
        std::pair{1.0, -1.5}, std::pair{2.0, 0.0}, std::pair{0.75, 0.25}};

    // closed-form constant against direct numeric minimization over the split point
    {
        detail::uniform_source rng(seed);
        double worst = 0.0;
        std::size_t n = 0;
        for (const auto& [p, q] : pairs) {
            const auto con = interpolation_constants_for(p, q);
            for (int i = 0; i < 50; ++i) {
                const double a = std::exp(rng.range(-3.0, 3.0));
                const double b = std::exp(rng.range(-3.0, 3.0));
                const double closed = con.c_pq * std::pow(a, con.e_q) * std::pow(b, con.e_p);
                const double numeric = interpolation_rhs_numeric(p, q, a, b);
                worst = std::max(worst, std::abs(closed - numeric) / numeric);
                ++n;
            }
        }
        rep.rows.push_back(detail::make_row("interpolation-constant", n, worst, 1e-8));
    }

    // the inequality itself on random band-limited states
    {
        const spectral_grid g(128, 2.0 * pi);
        gaussian_source gauss(seed + 1);
        double worst = 0.0; // max(0, lhs/rhs - 1)
        const std::size_t n_states = 100;
        for (std::size_t s = 0; s < n_states; ++s) {
            std::vector<cplx> psi(g.n_modes, cplx{0, 0});
            const long half = static_cast<long>(g.n_modes) / 2;
            for (long j = 1; j < half; ++j) {
                const double decay = 1.0 / (1.0 + 0.25 * static_cast<double>(j * j));
                const cplx c{decay * gauss.normal(), decay * gauss.normal()};
                psi[g.slot(j)] = c;
                psi[g.slot(-j)] = std::conj(c);
            }
            for (const auto& [p, q] : pairs) {
                const auto res = interpolation_check(g, psi, p, q);
                if (res.rhs > 0.0) worst = std::max(worst, res.lhs / res.rhs - 1.0);
            }
        }
        rep.rows.push_back(
            detail::make_row("interpolation-inequality", n_states * pairs.size(), std::max(0.0, worst), 1e-10));
    }
    return rep;
}

// --- driver ----------------------------------------------------------------------------

inline verify_report run_verify_suites(const run_config& rc, mutation mut = mutation::none) {
    verify_report rep;
    rep.append(kernel_identity_suite(rc.verify.samples, rc.seed));
    rep.append(representation_suite(rc.verify.samples, rc.verify.sigmas, rc.seed + 1));
    rep.append(symmetrization_suite(20, 64, rc.verify.sigmas, rc.seed + 2, mut));
    rep.append(cross_formulation_suite(rc.seed + 3));
    rep.append(conservation_suite(rc.seed + 4));
    rep.append(interpolation_suite(rc.seed + 5));
    return rep;
}

} // namespace surfwave

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "surfwave/analysis.hpp"
#include "surfwave/kernels.hpp"
#include "surfwave/spectral.hpp"
#include "surfwave/util.hpp"

namespace surfwave {

enum class formulation { spectral_convolution, spatial_hilbert, spatial_commutator, noncanonical };
enum class spatial_variant { hilbert_square, commutator };

inline const char* formulation_name(formulation f) {
    switch (f) {
        case formulation::spectral_convolution: return "spectral-convolution";
        case formulation::spatial_hilbert: return "spatial-hilbert";
        case formulation::spatial_commutator: return "spatial-commutator";
        case formulation::noncanonical: return "noncanonical";
    }
    return "?";
}

inline formulation formulation_from_name(const std::string& s) {
    if (s == "spectral-convolution") return formulation::spectral_convolution;
    if (s == "spatial-hilbert") return formulation::spatial_hilbert;
    if (s == "spatial-commutator") return formulation::spatial_commutator;
    if (s == "noncanonical") return formulation::noncanonical;
    throw config_error("unknown formulation '" + s + "'");
}

struct solver_config {
    formulation form = formulation::spatial_hilbert;
    double dt_safety = 0.5;
    double t_end = 1.0;
    std::size_t max_steps = 1000000;
    bool stop_on_blowup = true;
    double gradient_factor = 1e3; // stop when sup|phi_x| exceeds this times its initial value
    double drift_tol = 1e-4;      // stop when |psi| L2 drifts beyond this relative bound
    std::size_t diag_every = 100;
    std::size_t snapshot_every = 0; // 0 = no intermediate snapshots

    void validate() const {
        if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw config_error("solver.dt_safety must be in (0, 1]");
        if (!(t_end >= 0.0)) throw config_error("solver.t_end must be >= 0");
        if (max_steps == 0) throw config_error("solver.max_steps must be positive");
        if (!(gradient_factor > 1.0)) throw config_error("solver.gradient_factor must be > 1");
        if (!(drift_tol > 0.0)) throw config_error("solver.drift_tol must be > 0");
    }
};

struct step_diagnostics {
    double tau = 0.0;
    double psi_l2 = 0.0;
    double sup_phi_x = 0.0;
    std::vector<std::pair<double, double>> hs_norms; // (s, ||psi||_s)
    double blowup_integral = 0.0;
};

enum class stop_reason { t_end_reached, blowup_dt, blowup_gradient, drift, max_steps };

inline const char* stop_reason_name(stop_reason r) {
    switch (r) {
        case stop_reason::t_end_reached: return "t_end";
        case stop_reason::blowup_dt: return "blowup_dt";
        case stop_reason::blowup_gradient: return "blowup_gradient";
        case stop_reason::drift: return "drift";
        case stop_reason::max_steps: return "max_steps";
    }
    return "?";
}

struct simulation_record {
    std::vector<step_diagnostics> series;
    stop_reason reason = stop_reason::t_end_reached;
    std::size_t steps = 0;
    amplitude_state final_state;
    double initial_psi_l2 = 0.0;
    double final_drift = 0.0;
    double initial_sup_phi_x = 0.0;
    double initial_osc = 0.0;
    double final_osc = 0.0;
};

namespace detail {

// Integer-argument canonical kernel; the physical kernel is dk^2 times this by
// degree-2 homogeneity, applied once as a dk^3 factor together with the
// convolution weight.
inline double lam_int(long a, long b) {
    double aa = std::abs(static_cast<double>(a));
    double ab = std::abs(static_cast<double>(b));
    double as = std::abs(static_cast<double>(a + b));
    double den = as + aa + ab;
    return den == 0.0 ? 0.0 : 2.0 * as * aa * ab / den;
}

// Integer-argument half-derivative kernel (degree 1/2).
inline double s_int(long a, long b) {
    if (a == 0 || b == 0 || a + b == 0) return 0.0;
    double prod = std::abs(static_cast<double>(a) * static_cast<double>(b) *
                           static_cast<double>(a + b));
    return lam_int(a, b) / std::sqrt(prod);
}

// Precomputed kernel rows for the O(N^2) convolution forms. Row j (1..N/2-1)
// stores K(j-m, m) for m in [j-h, h], h = N/2-1; negative output rows follow
// from Hermitian symmetry.
struct kernel_table {
    std::size_t n = 0;
    std::vector<std::size_t> offset;
    std::vector<double> data;

    void build(std::size_t n_modes, bool s_form) {
        if (n == n_modes) return;
        n = n_modes;
        long h = static_cast<long>(n) / 2 - 1;
        offset.assign(static_cast<std::size_t>(h) + 2, 0);
        std::size_t total = 0;
        for (long j = 1; j <= h; ++j) {
            offset[static_cast<std::size_t>(j)] = total;
            total += static_cast<std::size_t>(2 * h - j + 1);
        }
        offset[static_cast<std::size_t>(h) + 1] = total;
        data.resize(total);
        std::size_t t = 0;
        for (long j = 1; j <= h; ++j)
            for (long m = j - h; m <= h; ++m)
                data[t++] = s_form ? s_int(j - m, m) : lam_int(j - m, m);
    }
};

} // namespace detail

// Defining dynamics: dphi_hat/dtau(k) = -i sgn(k) sum_l Lambda(k-l, l)
// phi_hat(k-l) phi_hat(l) dl over the truncated spectrum, dl = 2 pi / L.
inline std::vector<cplx> rhs_spectral_convolution(const spectral_grid& g, const std::vector<cplx>& c) {
    const long n = static_cast<long>(g.n_modes);
    const long h = n / 2 - 1;
    std::vector<cplx> out(g.n_modes, 0.0);
    double w = g.dk * g.dk * g.dk;
    for (long j = 1; j <= h; ++j) {
        cplx acc = 0.0;
        for (long m = j - h; m <= h; ++m) {
            long r = j - m;
            const cplx& cr = c[static_cast<std::size_t>(r < 0 ? r + n : r)];
            const cplx& cm = c[static_cast<std::size_t>(m < 0 ? m + n : m)];
            acc += detail::lam_int(r, m) * cr * cm;
        }
        cplx v = cplx(0.0, -1.0) * w * acc;
        out[static_cast<std::size_t>(j)] = v;
        out[static_cast<std::size_t>(n - j)] = std::conj(v);
    }
    return out;
}

// Noncanonical form: dpsi_hat/dtau(k) = -i k sum_l S(k-l, l) psi_hat(k-l)
// psi_hat(l) dl, with the degree-1/2 kernel S.
inline std::vector<cplx> rhs_noncanonical(const spectral_grid& g, const std::vector<cplx>& psi) {
    const long n = static_cast<long>(g.n_modes);
    const long h = n / 2 - 1;
    std::vector<cplx> out(g.n_modes, 0.0);
    double w = std::sqrt(g.dk) * g.dk;
    for (long j = 1; j <= h; ++j) {
        cplx acc = 0.0;
        for (long m = j - h; m <= h; ++m) {
            long r = j - m;
            const cplx& pr = psi[static_cast<std::size_t>(r < 0 ? r + n : r)];
            const cplx& pm = psi[static_cast<std::size_t>(m < 0 ? m + n : m)];
            acc += detail::s_int(r, m) * pr * pm;
        }
        cplx v = cplx(0.0, -g.k[static_cast<std::size_t>(j)] * w) * acc;
        out[static_cast<std::size_t>(j)] = v;
        out[static_cast<std::size_t>(n - j)] = std::conj(v);
    }
    return out;
}

// Spatial assemblies of the same dynamics via Hilbert-transform primitives,
// with Phi = H[phi]:
//   hilbert_square: phi_tau = 1/2 H[Phi^2]_xx + Phi phi_xx
//   commutator:     phi_tau = H[Phi Phi_xx] - Phi H[Phi_xx] + H[(Phi_x)^2]
inline std::vector<cplx> rhs_spatial(const spectral_grid& g, const std::vector<cplx>& c,
                                     spatial_variant variant) {
    std::vector<cplx> phi_h = hilbert(g, c);
    std::vector<cplx> out;
    if (variant == spatial_variant::hilbert_square) {
        std::vector<cplx> t1 = derivative(g, hilbert(g, dealiased_product(g, phi_h, phi_h)), 2);
        std::vector<cplx> t2 = dealiased_product(g, phi_h, derivative(g, c, 2));
        out.resize(g.n_modes);
        for (std::size_t i = 0; i < g.n_modes; ++i) out[i] = 0.5 * t1[i] + t2[i];
    } else {
        std::vector<cplx> phi_xx = derivative(g, phi_h, 2);
        std::vector<cplx> t1 = hilbert(g, dealiased_product(g, phi_h, phi_xx));
        std::vector<cplx> t2 = dealiased_product(g, phi_h, hilbert(g, phi_xx));
        std::vector<cplx> phi_x = derivative(g, phi_h, 1);
        std::vector<cplx> t3 = hilbert(g, dealiased_product(g, phi_x, phi_x));
        out.resize(g.n_modes);
        for (std::size_t i = 0; i < g.n_modes; ++i) out[i] = t1[i] - t2[i] + t3[i];
    }
    out[0] = 0.0;
    out[g.nyquist()] = 0.0;
    return out;
}

// Relative size of the discrete triple sum
// sum_{k,l} k S(k-l, l) psi_hat(k-l) psi_hat(l) psi_hat(-k),
// which vanishes by the cyclic symmetry of the kernel (the conservation
// mechanism for ||psi||_0).
inline double cyclic_cancellation_residual(const spectral_grid& g, const std::vector<cplx>& psi) {
    const long n = static_cast<long>(g.n_modes);
    const long h = n / 2 - 1;
    cplx num = 0.0;
    double den = 0.0;
    for (long j = -h; j <= h; ++j) {
        if (j == 0) continue;
        const cplx pk = psi[static_cast<std::size_t>(j > 0 ? n - j : -j)]; // psi_hat(-k)
        for (long m = std::max(j - h, -h); m <= std::min(j + h, h); ++m) {
            long r = j - m;
            double s = detail::s_int(r, m);
            if (s == 0.0) continue;
            const cplx& pr = psi[static_cast<std::size_t>(r < 0 ? r + n : r)];
            const cplx& pm = psi[static_cast<std::size_t>(m < 0 ? m + n : m)];
            cplx term = (g.dk * static_cast<double>(j)) * s * pr * pm * pk;
            num += term;
            den += std::abs(term);
        }
    }
    return den > 0.0 ? std::abs(num) / den : 0.0;
}

inline double sup_gradient(const spectral_grid& g, const std::vector<cplx>& c) {
    std::vector<double> v = to_physical(g, derivative(g, c, 1));
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double oscillation(const spectral_grid& g, const std::vector<cplx>& c) {
    std::vector<double> v = to_physical(g, c);
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

// Time integrator: classical RK4 over the chosen right-hand-side assembly,
// with preallocated workspaces. The spatial paths batch the two Hermitian
// spectra of each stage into one complex transform pair (real and imaginary
// parts carry separate fields), halving the FFT count per stage.
class integrator {
  public:
    integrator(const spectral_grid& g, formulation f) : g_(&g), form_(f) {
        std::size_t n = g.n_modes;
        if (f == formulation::spectral_convolution) {
            lam_.build(n, false);
        } else if (f == formulation::noncanonical) {
            sk_.build(n, true);
        }
        s1_.resize(n);
        s2_.resize(n);
        s3_.resize(n);
        s4_.resize(n);
        w1_.resize(2 * n);
        w2_.resize(2 * n);
        w3_.resize(2 * n);
        k1_.resize(n);
        k2_.resize(n);
        k3_.resize(n);
        k4_.resize(n);
        stage_.resize(n);
        phys_.resize(n);
    }

    const spectral_grid& grid() const { return *g_; }
    formulation form() const { return form_; }

    // d(phi_hat)/dtau for the configured formulation (psi runs are converted
    // through the linear change of variables, which commutes with d/dtau).
    void rhs(const std::vector<cplx>& c, std::vector<cplx>& out) {
        switch (form_) {
            case formulation::spectral_convolution: rhs_table(c, out, lam_, false); break;
            case formulation::noncanonical: rhs_psi_path(c, out); break;
            case formulation::spatial_hilbert: rhs_hilbert_fast(c, out); break;
            case formulation::spatial_commutator: rhs_commutator_fast(c, out); break;
        }
        out[0] = 0.0;
        out[g_->nyquist()] = 0.0;
    }

    // max|Phi| over collocation points, the stiffness scale of the dt heuristic
    double max_abs_hilbert(const std::vector<cplx>& c) {
        std::size_t n = g_->n_modes;
        for (std::size_t i = 0; i < n; ++i) stage_[i] = cplx(0.0, -g_->sign_k[i]) * c[i];
        g_->plan_n.inverse(stage_);
        double scale = g_->dk * static_cast<double>(n);
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(stage_[i].real() * scale));
        return m;
    }

    double sup_gradient_fast(const std::vector<cplx>& c) {
        std::size_t n = g_->n_modes;
        for (std::size_t i = 0; i < n; ++i) stage_[i] = cplx(0.0, g_->k[i]) * c[i];
        stage_[g_->nyquist()] = 0.0;
        g_->plan_n.inverse(stage_);
        double scale = g_->dk * static_cast<double>(n);
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(stage_[i].real() * scale));
        return m;
    }

    // One RK4 step with dt = dt_safety / (max|Phi| k_max^2 + 1e-12), clamped
    // at t_end. Returns the dt taken (0 when already at t_end).
    double step(amplitude_state& st, double dt_safety, double t_end) {
        std::vector<cplx>& c = st.coeffs;
        double kmax = static_cast<double>(g_->n_modes / 2) * g_->dk;
        double dt = dt_safety / (max_abs_hilbert(c) * kmax * kmax + 1e-12);
        if (st.tau + dt > t_end) dt = t_end - st.tau;
        if (dt < 1e-14) return dt;
        rhs(c, k1_);
        combine(c, k1_, 0.5 * dt);
        rhs(stage_, k2_);
        combine(c, k2_, 0.5 * dt);
        rhs(stage_, k3_);
        combine(c, k3_, dt);
        rhs(stage_, k4_);
        for (std::size_t i = 0; i < c.size(); ++i)
            c[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        enforce_symmetry(*g_, c);
        st.tau += dt;
        return dt;
    }

  private:
    void combine(const std::vector<cplx>& c, const std::vector<cplx>& k, double f) {
        for (std::size_t i = 0; i < c.size(); ++i) stage_[i] = c[i] + f * k[i];
        enforce_symmetry(*g_, stage_);
    }

    void rhs_table(const std::vector<cplx>& c, std::vector<cplx>& out, const detail::kernel_table& tab,
                   bool s_form) {
        const long n = static_cast<long>(g_->n_modes);
        const long h = n / 2 - 1;
        std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
        double w = s_form ? std::sqrt(g_->dk) * g_->dk : g_->dk * g_->dk * g_->dk;
        for (long j = 1; j <= h; ++j) {
            const double* row = tab.data.data() + tab.offset[static_cast<std::size_t>(j)];
            cplx acc = 0.0;
            std::size_t t = 0;
            for (long m = j - h; m <= h; ++m, ++t) {
                long r = j - m;
                const cplx& cr = c[static_cast<std::size_t>(r < 0 ? r + n : r)];
                const cplx& cm = c[static_cast<std::size_t>(m < 0 ? m + n : m)];
                acc += row[t] * cr * cm;
            }
            cplx v = s_form ? cplx(0.0, -g_->k[static_cast<std::size_t>(j)] * w) * acc
                            : cplx(0.0, -w) * acc;
            out[static_cast<std::size_t>(j)] = v;
            out[static_cast<std::size_t>(n - j)] = std::conj(v);
        }
    }

    void rhs_psi_path(const std::vector<cplx>& c, std::vector<cplx>& out) {
        std::size_t n = g_->n_modes;
        for (std::size_t i = 0; i < n; ++i) s1_[i] = std::sqrt(std::abs(g_->k[i])) * c[i];
        rhs_table(s1_, s2_, sk_, true);
        for (std::size_t i = 0; i < n; ++i) {
            double ak = std::abs(g_->k[i]);
            out[i] = ak > 0.0 ? s2_[i] / std::sqrt(ak) : cplx(0.0, 0.0);
        }
    }

    // Zero-pads two Hermitian spectra into w as a + i*b and inverse-transforms:
    // afterwards Re(w) and Im(w) hold the two padded physical fields.
    void packed_physical(const std::vector<cplx>& a, const std::vector<cplx>& b, std::vector<cplx>& w) {
        const std::size_t n = g_->n_modes, m = 2 * n, half = n / 2;
        std::fill(w.begin(), w.end(), cplx(0.0, 0.0));
        for (std::size_t i = 0; i < half; ++i) w[i] = a[i] + cplx(0.0, 1.0) * b[i];
        for (std::size_t i = 1; i < half; ++i) w[m - i] = a[n - i] + cplx(0.0, 1.0) * b[n - i];
        g_->plan_2n.inverse(w);
    }

    // Forward-transforms the packed product array w = p + i*q (p, q real
    // physical products), splitting the spectrum into the dealiased,
    // continuum-scaled coefficient arrays of p and q.
    void packed_spectra(std::vector<cplx>& w, std::vector<cplx>& p_out, std::vector<cplx>& q_out) {
        const std::size_t n = g_->n_modes, m = 2 * n, half = n / 2;
        g_->plan_2n.forward(w);
        double scale = static_cast<double>(m) * g_->dk;
        auto split = [&](std::size_t idx, std::size_t out_idx) {
            std::size_t mir = idx == 0 ? 0 : m - idx;
            cplx f = w[idx], fm = std::conj(w[mir]);
            p_out[out_idx] = 0.5 * (f + fm) * scale;
            q_out[out_idx] = cplx(0.0, -0.5) * (f - fm) * scale;
        };
        for (std::size_t i = 0; i < half; ++i) split(i, i);
        for (std::size_t i = 1; i < half; ++i) split(m - i, n - i);
        p_out[half] = q_out[half] = 0.0;
    }

    void rhs_hilbert_fast(const std::vector<cplx>& c, std::vector<cplx>& out) {
        const std::size_t n = g_->n_modes;
        for (std::size_t i = 0; i < n; ++i) {
            s1_[i] = cplx(0.0, -g_->sign_k[i]) * c[i]; // Phi
            s2_[i] = -g_->k[i] * g_->k[i] * c[i];      // phi_xx
        }
        packed_physical(s1_, s2_, w1_);
        for (std::size_t i = 0; i < w1_.size(); ++i) {
            double a = w1_[i].real(), b = w1_[i].imag();
            w2_[i] = cplx(a * a, a * b); // Phi^2 and Phi*phi_xx share one transform
        }
        packed_spectra(w2_, s3_, s4_);
        for (std::size_t i = 0; i < n; ++i) {
            cplx t1 = -g_->k[i] * g_->k[i] * cplx(0.0, -g_->sign_k[i]) * s3_[i];
            out[i] = 0.5 * t1 + s4_[i];
        }
    }

    void rhs_commutator_fast(const std::vector<cplx>& c, std::vector<cplx>& out) {
        const std::size_t n = g_->n_modes;
        for (std::size_t i = 0; i < n; ++i) {
            cplx phi_h = cplx(0.0, -g_->sign_k[i]) * c[i];
            s1_[i] = phi_h;                              // Phi
            s2_[i] = -g_->k[i] * g_->k[i] * phi_h;       // Phi_xx
        }
        for (std::size_t i = 0; i < n; ++i) {
            s3_[i] = cplx(0.0, -g_->sign_k[i]) * s2_[i]; // H[Phi_xx]
            s4_[i] = cplx(0.0, g_->k[i]) * s1_[i];       // Phi_x
        }
        s4_[g_->nyquist()] = 0.0;
        packed_physical(s1_, s2_, w1_); // A = Phi, B = Phi_xx
        packed_physical(s3_, s4_, w2_); // C = H[Phi_xx], D = Phi_x
        for (std::size_t i = 0; i < w1_.size(); ++i) {
            double a = w1_[i].real(), b = w1_[i].imag();
            double cc = w2_[i].real(), d = w2_[i].imag();
            w3_[i] = cplx(a * b, a * cc); // Phi*Phi_xx and Phi*H[Phi_xx]
            w2_[i] = cplx(d * d, 0.0);    // (Phi_x)^2
        }
        packed_spectra(w3_, s1_, s2_);
        packed_spectra(w2_, s3_, s4_); // s4_ receives the zero imaginary channel
        for (std::size_t i = 0; i < n; ++i) {
            cplx t1 = cplx(0.0, -g_->sign_k[i]) * s1_[i];
            cplx t3 = cplx(0.0, -g_->sign_k[i]) * s3_[i];
            out[i] = t1 - s2_[i] + t3;
        }
    }

    const spectral_grid* g_;
    formulation form_;
    detail::kernel_table lam_, sk_;
    std::vector<cplx> s1_, s2_, s3_, s4_;
    std::vector<cplx> w1_, w2_, w3_;
    std::vector<cplx> k1_, k2_, k3_, k4_, stage_;
    std::vector<double> phys_;
};

// One adaptive RK4 step of the configured formulation; returns the advanced
// state and its diagnostics.
inline std::pair<amplitude_state, step_diagnostics> step(const amplitude_state& state,
                                                         const solver_config& cfg,
                                                         const spectral_grid& g) {
    cfg.validate();
    integrator integ(g, cfg.form);
    amplitude_state st = state;
    enforce_symmetry(g, st.coeffs);
    double dt = integ.step(st, cfg.dt_safety, cfg.t_end);
    if (dt < 1e-14 && st.tau < cfg.t_end)
        throw precondition_error("step size underflow: imminent blow-up");
    step_diagnostics d;
    d.tau = st.tau;
    std::vector<cplx> psi = phi_to_psi(g, st.coeffs);
    d.psi_l2 = homogeneous_norm(g, psi, 0.0);
    d.sup_phi_x = sup_gradient(g, st.coeffs);
    return {std::move(st), d};
}

struct run_callbacks {
    std::function<void(const step_diagnostics&)> on_diag;
    std::function<void(const amplitude_state&, std::size_t)> on_snapshot;
};

inline simulation_record run(const spectral_grid& g, amplitude_state initial, const solver_config& cfg,
                             const norm_ladder& norms, const run_callbacks& cb = {}) {
    cfg.validate();
    norms.validate();
    integrator integ(g, cfg.form);
    simulation_record rec;
    amplitude_state st = std::move(initial);
    enforce_symmetry(g, st.coeffs);

    std::vector<cplx> psi = phi_to_psi(g, st.coeffs);
    rec.initial_psi_l2 = homogeneous_norm(g, psi, 0.0);
    rec.initial_sup_phi_x = sup_gradient(g, st.coeffs);
    rec.initial_osc = oscillation(g, st.coeffs);
    blowup_accumulator blowup;
    blowup.update(blowup_integrand(g, psi, norms.s_prime), 0.0);

    auto diag_at = [&](double blowup_value) {
        step_diagnostics d;
        d.tau = st.tau;
        std::vector<cplx> p = phi_to_psi(g, st.coeffs);
        d.psi_l2 = homogeneous_norm(g, p, 0.0);
        d.sup_phi_x = integ.sup_gradient_fast(st.coeffs);
        for (double s : norms.s_values) d.hs_norms.emplace_back(s, homogeneous_norm(g, p, s));
        d.blowup_integral = blowup_value;
        return d;
    };

    auto emit = [&](const step_diagnostics& d) {
        rec.series.push_back(d);
        if (cb.on_diag) cb.on_diag(d);
    };
    emit(diag_at(0.0));

    rec.reason = stop_reason::max_steps;
    while (rec.steps < cfg.max_steps) {
        if (st.tau >= cfg.t_end) {
            rec.reason = stop_reason::t_end_reached;
            break;
        }
        double dt = integ.step(st, cfg.dt_safety, cfg.t_end);
        if (dt < 1e-14) {
            rec.reason = stop_reason::blowup_dt;
            break;
        }
        ++rec.steps;

        psi = phi_to_psi(g, st.coeffs);
        double l2 = homogeneous_norm(g, psi, 0.0);
        double blow = blowup.update(blowup_integrand(g, psi, norms.s_prime), dt);
        double sup = integ.sup_gradient_fast(st.coeffs);

        bool cadence = cfg.diag_every > 0 && rec.steps % cfg.diag_every == 0;
        if (cadence) emit(diag_at(blow));
        if (cb.on_snapshot && cfg.snapshot_every > 0 && rec.steps % cfg.snapshot_every == 0)
            cb.on_snapshot(st, rec.steps);

        if (cfg.stop_on_blowup) {
            if (rec.initial_sup_phi_x > 0.0 && sup > cfg.gradient_factor * rec.initial_sup_phi_x) {
                rec.reason = stop_reason::blowup_gradient;
                break;
            }
            if (rec.initial_psi_l2 > 0.0 &&
                std::abs(l2 - rec.initial_psi_l2) / rec.initial_psi_l2 > cfg.drift_tol) {
                rec.reason = stop_reason::drift;
                break;
            }
        }
    }
    if (rec.steps >= cfg.max_steps && rec.reason == stop_reason::max_steps && st.tau >= cfg.t_end)
        rec.reason = stop_reason::t_end_reached;

    step_diagnostics last = diag_at(blowup.value);
    if (rec.series.empty() || rec.series.back().tau != last.tau) emit(last);
    psi = phi_to_psi(g, st.coeffs);
    double l2 = homogeneous_norm(g, psi, 0.0);
    rec.final_drift = rec.initial_psi_l2 > 0.0 ? std::abs(l2 - rec.initial_psi_l2) / rec.initial_psi_l2 : 0.0;
    rec.final_osc = oscillation(g, st.coeffs);
    rec.final_state = std::move(st);
    return rec;
}

} // namespace surfwave

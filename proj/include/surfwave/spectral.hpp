#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "surfwave/fft.hpp"
#include "surfwave/util.hpp"

namespace surfwave {

// Periodic collocation grid. Slot i of a coefficient array holds wavenumber
// index j = i for i <= N/2 and j = i - N above, so j runs over
// [-N/2+1, N/2] with the Nyquist mode at slot N/2. Coefficients are samples
// of the continuum transform: physical(theta_m) = dk * sum_j c_j e^{i k_j theta_m}.
struct spectral_grid {
    std::size_t n_modes = 0;
    double length = 0.0;
    double dk = 0.0;
    std::vector<long> j;        // slot -> signed wavenumber index
    std::vector<double> k;      // dk * j
    std::vector<double> sign_k; // sgn(j)
    fft_plan plan_n, plan_2n;

    spectral_grid(std::size_t n, double len) : n_modes(n), length(len) {
        if (n < 16 || (n & (n - 1)) != 0)
            throw config_error("grid.n_modes must be a power of two >= 16");
        if (!(len > 0.0) || !std::isfinite(len)) throw config_error("grid.length must be finite and > 0");
        dk = 2.0 * pi / len;
        j.resize(n);
        k.resize(n);
        sign_k.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            long jj = i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
            j[i] = jj;
            k[i] = dk * static_cast<double>(jj);
            sign_k[i] = jj > 0 ? 1.0 : (jj < 0 ? -1.0 : 0.0);
        }
        plan_n = fft_plan(n);
        plan_2n = fft_plan(2 * n);
    }

    std::size_t nyquist() const { return n_modes / 2; }

    std::size_t slot(long jj) const {
        long n = static_cast<long>(n_modes);
        long r = jj % n;
        if (r < 0) r += n;
        return static_cast<std::size_t>(r);
    }

    std::vector<double> theta() const {
        std::vector<double> t(n_modes);
        for (std::size_t i = 0; i < n_modes; ++i) t[i] = length * static_cast<double>(i) / static_cast<double>(n_modes);
        return t;
    }
};

// Fourier coefficients of the real interface displacement at slow time tau.
struct amplitude_state {
    std::vector<cplx> coeffs;
    double tau = 0.0;
};

inline double symmetry_violation(const spectral_grid& g, const std::vector<cplx>& c) {
    double worst = std::abs(c[0].imag());
    worst = std::max(worst, std::abs(c[g.nyquist()].imag()));
    for (std::size_t i = 1; i < g.nyquist(); ++i) {
        std::size_t mi = g.n_modes - i;
        worst = std::max(worst, std::abs(c[mi] - std::conj(c[i])));
    }
    return worst;
}

inline void require_symmetry(const spectral_grid& g, const std::vector<cplx>& c) {
    if (c.size() != g.n_modes) throw error("state size does not match grid");
    if (symmetry_violation(g, c) > 1e-10) throw error("hermitian symmetry violated beyond 1e-10");
}

// Projects onto the representable class: zero Nyquist, conjugate-paired halves,
// real mean.
inline void enforce_symmetry(const spectral_grid& g, std::vector<cplx>& c) {
    c[g.nyquist()] = 0.0;
    for (std::size_t i = 1; i < g.nyquist(); ++i) {
        std::size_t mi = g.n_modes - i;
        cplx avg = 0.5 * (c[i] + std::conj(c[mi]));
        c[i] = avg;
        c[mi] = std::conj(avg);
    }
    c[0] = cplx(c[0].real(), 0.0);
}

inline std::vector<double> to_physical(const spectral_grid& g, const std::vector<cplx>& c) {
    require_symmetry(g, c);
    std::vector<cplx> buf = c;
    g.plan_n.inverse(buf);
    double scale = g.dk * static_cast<double>(g.n_modes);
    std::vector<double> out(g.n_modes);
    for (std::size_t i = 0; i < g.n_modes; ++i) out[i] = buf[i].real() * scale;
    return out;
}

inline std::vector<cplx> to_spectral(const spectral_grid& g, const std::vector<double>& values) {
    if (values.size() != g.n_modes) throw error("physical array size does not match grid");
    std::vector<cplx> buf(g.n_modes);
    for (std::size_t i = 0; i < g.n_modes; ++i) buf[i] = values[i];
    g.plan_n.forward(buf);
    double scale = 1.0 / (static_cast<double>(g.n_modes) * g.dk);
    for (auto& v : buf) v *= scale;
    return buf;
}

// Fourier multiplier -i sgn(k): H[e^{ikx}] = -i sgn(k) e^{ikx}, H[cos] = sin.
inline std::vector<cplx> hilbert(const spectral_grid& g, const std::vector<cplx>& c) {
    std::vector<cplx> out(g.n_modes);
    for (std::size_t i = 0; i < g.n_modes; ++i) out[i] = cplx(0.0, -g.sign_k[i]) * c[i];
    return out;
}

// Multiplier (ik)^order; the Nyquist mode is zeroed for odd orders, where the
// sign of k is ambiguous.
inline std::vector<cplx> derivative(const spectral_grid& g, const std::vector<cplx>& c, int order) {
    if (order != 1 && order != 2) throw config_error("derivative order must be 1 or 2");
    std::vector<cplx> out(g.n_modes);
    if (order == 1) {
        for (std::size_t i = 0; i < g.n_modes; ++i) out[i] = cplx(0.0, g.k[i]) * c[i];
        out[g.nyquist()] = 0.0;
    } else {
        for (std::size_t i = 0; i < g.n_modes; ++i) out[i] = -g.k[i] * g.k[i] * c[i];
    }
    return out;
}

// Pointwise physical product, dealiased by zero-padding to 2N so every
// retained output mode (|j| <= N/2 - 1) is alias-free — the exact projection
// of the product of the two band-limited inputs. Output keeps the continuum
// scaling: it is the discrete convolution sum_l a(k-l) b(l) dk.
inline std::vector<cplx> dealiased_product(const spectral_grid& g, const std::vector<cplx>& a,
                                           const std::vector<cplx>& b) {
    const std::size_t n = g.n_modes, m = 2 * n, half = n / 2;
    std::vector<cplx> pa(m, 0.0), pb(m, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        pa[i] = a[i];
        pb[i] = b[i];
    }
    for (std::size_t i = 1; i < half; ++i) {
        pa[m - i] = a[n - i];
        pb[m - i] = b[n - i];
    }
    g.plan_2n.inverse(pa);
    g.plan_2n.inverse(pb);
    for (std::size_t i = 0; i < m; ++i) pa[i] *= pb[i];
    g.plan_2n.forward(pa);
    double scale = static_cast<double>(m) * g.dk;
    std::vector<cplx> out(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) out[i] = pa[i] * scale;
    for (std::size_t i = 1; i < half; ++i) out[n - i] = pa[m - i] * scale;
    out[g.nyquist()] = 0.0;
    return out;
}

// Noncanonical change of variables: psi_hat = |k|^(1/2) phi_hat.
inline std::vector<cplx> phi_to_psi(const spectral_grid& g, const std::vector<cplx>& c) {
    std::vector<cplx> out(g.n_modes);
    for (std::size_t i = 0; i < g.n_modes; ++i) out[i] = std::sqrt(std::abs(g.k[i])) * c[i];
    return out;
}

inline std::vector<cplx> psi_to_phi(const spectral_grid& g, const std::vector<cplx>& p, double mean = 0.0) {
    std::vector<cplx> out(g.n_modes);
    for (std::size_t i = 0; i < g.n_modes; ++i) {
        double ak = std::abs(g.k[i]);
        out[i] = ak > 0.0 ? p[i] / std::sqrt(ak) : cplx(0.0, 0.0);
    }
    out[0] = mean;
    return out;
}

} // namespace surfwave

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "surfwave/spectral.hpp"
#include "surfwave/util.hpp"

namespace surfwave {

// Deterministic standard normals: 53-bit uniforms from mt19937_64 through
// Box-Muller, platform-independent given the seed.
class gaussian_source {
  public:
    explicit gaussian_source(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

enum class profile_kind { cosine, gaussian_bump, random_bandlimited };

inline profile_kind profile_from_name(const std::string& s) {
    if (s == "cosine") return profile_kind::cosine;
    if (s == "gaussian-bump") return profile_kind::gaussian_bump;
    if (s == "random-bandlimited") return profile_kind::random_bandlimited;
    throw config_error("unknown profile '" + s + "'");
}

inline const char* profile_name(profile_kind k) {
    switch (k) {
        case profile_kind::cosine: return "cosine";
        case profile_kind::gaussian_bump: return "gaussian-bump";
        case profile_kind::random_bandlimited: return "random-bandlimited";
    }
    return "?";
}

struct profile_config {
    profile_kind kind = profile_kind::cosine;
    double amplitude = 0.1;
    long mode = 1;        // cosine
    double center = 0.5;  // gaussian-bump, as a fraction of the period
    double width = 0.05;  // gaussian-bump, as a fraction of the period
    long band_min = 1;    // random-bandlimited
    long band_max = 8;

    void validate(std::size_t n_modes) const {
        long h = static_cast<long>(n_modes) / 2 - 1;
        if (!std::isfinite(amplitude)) throw config_error("profile.amplitude must be finite");
        if (kind == profile_kind::cosine && (mode < 1 || mode > h))
            throw config_error("profile.mode must be in [1, N/2-1]");
        if (kind == profile_kind::gaussian_bump && !(width > 0.0))
            throw config_error("profile.width must be > 0");
        if (kind == profile_kind::random_bandlimited &&
            (band_min < 1 || band_max < band_min || band_max > h))
            throw config_error("profile.band must satisfy 1 <= band_min <= band_max <= N/2-1");
    }
};

// phi(theta) = amplitude * cos(mode dk theta), built spectrally as an exact
// conjugate pair.
inline amplitude_state make_cosine(const spectral_grid& g, double amplitude, long mode) {
    amplitude_state st;
    st.coeffs.assign(g.n_modes, cplx(0.0, 0.0));
    st.coeffs[g.slot(mode)] = amplitude / (2.0 * g.dk);
    st.coeffs[g.slot(-mode)] = amplitude / (2.0 * g.dk);
    return st;
}

inline amplitude_state make_sine(const spectral_grid& g, double amplitude, long mode) {
    amplitude_state st;
    st.coeffs.assign(g.n_modes, cplx(0.0, 0.0));
    st.coeffs[g.slot(mode)] = cplx(0.0, -amplitude / (2.0 * g.dk));
    st.coeffs[g.slot(-mode)] = cplx(0.0, amplitude / (2.0 * g.dk));
    return st;
}

// Periodic bump amplitude * exp(-(theta - c L)^2 / (2 (w L)^2)), sampled on the
// collocation grid (images beyond one period are negligible for w << 1).
inline amplitude_state make_gaussian_bump(const spectral_grid& g, double amplitude, double center,
                                          double width) {
    std::vector<double> v(g.n_modes);
    double c0 = center * g.length, w = width * g.length;
    for (std::size_t i = 0; i < g.n_modes; ++i) {
        double th = g.length * static_cast<double>(i) / static_cast<double>(g.n_modes);
        double d = th - c0;
        d -= g.length * std::round(d / g.length);
        v[i] = amplitude * std::exp(-d * d / (2.0 * w * w));
    }
    amplitude_state st;
    st.coeffs = to_spectral(g, v);
    enforce_symmetry(g, st.coeffs);
    return st;
}

// Seeded band-limited noise: each mode in [band_min, band_max] gets a complex
// standard normal scaled by amplitude / sqrt(band count), then the conjugate
// half is mirrored.
inline amplitude_state make_random_bandlimited(const spectral_grid& g, double amplitude, long band_min,
                                               long band_max, std::uint64_t seed) {
    gaussian_source src(seed);
    amplitude_state st;
    st.coeffs.assign(g.n_modes, cplx(0.0, 0.0));
    double scale = amplitude / std::sqrt(static_cast<double>(band_max - band_min + 1));
    for (long j = band_min; j <= band_max; ++j) {
        double re = src.normal(), im = src.normal();
        st.coeffs[g.slot(j)] = scale * cplx(re, im);
        st.coeffs[g.slot(-j)] = scale * cplx(re, -im);
    }
    return st;
}

inline amplitude_state make_profile(const spectral_grid& g, const profile_config& p, std::uint64_t seed) {
    p.validate(g.n_modes);
    switch (p.kind) {
        case profile_kind::cosine: return make_cosine(g, p.amplitude, p.mode);
        case profile_kind::gaussian_bump: return make_gaussian_bump(g, p.amplitude, p.center, p.width);
        case profile_kind::random_bandlimited:
            return make_random_bandlimited(g, p.amplitude, p.band_min, p.band_max, seed);
    }
    throw config_error("unknown profile kind");
}

} // namespace surfwave

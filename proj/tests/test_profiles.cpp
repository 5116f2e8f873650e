// Initial-condition constructors: spectral layout, determinism, validation.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "surfwave/analysis.hpp"
#include "surfwave/profiles.hpp"

using namespace surfwave;

TEST_CASE("cosine profile is an exact conjugate pair") {
    spectral_grid g(32, pi); // dk = 2
    amplitude_state st = make_cosine(g, 0.3, 5);
    CHECK(st.coeffs[g.slot(5)] == cplx(0.3 / 4.0, 0.0));
    CHECK(st.coeffs[g.slot(-5)] == cplx(0.3 / 4.0, 0.0));

    std::vector<double> phys = to_physical(g, st.coeffs);
    std::vector<double> th = g.theta();
    for (std::size_t i = 0; i < phys.size(); ++i)
        CHECK(std::abs(phys[i] - 0.3 * std::cos(5.0 * g.dk * th[i])) <= 1e-14);
}

TEST_CASE("sine profile shifts the cosine by a quarter period") {
    spectral_grid g(32, 2.0 * pi);
    amplitude_state st = make_sine(g, 0.2, 3);
    CHECK(st.coeffs[g.slot(3)] == cplx(0.0, -0.1));
    CHECK(st.coeffs[g.slot(-3)] == cplx(0.0, 0.1));
    std::vector<double> phys = to_physical(g, st.coeffs);
    std::vector<double> th = g.theta();
    for (std::size_t i = 0; i < phys.size(); ++i)
        CHECK(std::abs(phys[i] - 0.2 * std::sin(3.0 * th[i])) <= 1e-14);
}

TEST_CASE("gaussian bump peaks at the requested center") {
    spectral_grid g(256, 2.0 * pi);
    // center = 1/4 puts the peak exactly on collocation cell 64.
    const double amp = 0.4, center = 0.25, width = 0.04;
    amplitude_state st = make_gaussian_bump(g, amp, center, width);

    CHECK(symmetry_violation(g, st.coeffs) <= 1e-15);
    std::vector<double> phys = to_physical(g, st.coeffs);
    std::size_t arg_max = 0;
    for (std::size_t i = 1; i < phys.size(); ++i)
        if (phys[i] > phys[arg_max]) arg_max = i;
    CHECK(arg_max == 64);
    CHECK(std::abs(phys[arg_max] - amp) <= 1e-12);

    // Far from the bump the profile is numerically negligible.
    std::size_t opposite = (arg_max + g.n_modes / 2) % g.n_modes;
    CHECK(std::abs(phys[opposite]) <= 1e-10 * amp);
}

TEST_CASE("random band-limited profile respects its band and seed") {
    spectral_grid g(64, 2.0 * pi);
    amplitude_state a = make_random_bandlimited(g, 0.05, 3, 9, 2024);
    amplitude_state b = make_random_bandlimited(g, 0.05, 3, 9, 2024);
    amplitude_state c = make_random_bandlimited(g, 0.05, 3, 9, 2025);

    CHECK(a.coeffs == b.coeffs); // bit-identical for equal seeds
    CHECK(a.coeffs != c.coeffs);
    CHECK(symmetry_violation(g, a.coeffs) == 0.0);

    bool any_in_band = false;
    for (std::size_t i = 0; i < g.n_modes; ++i) {
        long aj = std::abs(g.j[i]);
        if (aj >= 3 && aj <= 9) {
            if (std::abs(a.coeffs[i]) > 0.0) any_in_band = true;
        } else {
            CHECK(a.coeffs[i] == cplx(0.0, 0.0));
        }
    }
    CHECK(any_in_band);

    // The normalization keeps the expected size tied to amplitude alone:
    // each pair contributes ~amplitude^2 / n_band on average, so the norm is
    // O(amplitude); just pin a generous deterministic window.
    double l2 = homogeneous_norm(g, phi_to_psi(g, a.coeffs), 0.0);
    CHECK(l2 > 0.0);
    CHECK(l2 < 10.0 * 0.05 * std::sqrt(9.0)); // |k| <= 9 weight in the psi variables
}

TEST_CASE("profile dispatcher forwards parameters and validates") {
    spectral_grid g(64, 2.0 * pi);

    profile_config pc;
    pc.kind = profile_kind::cosine;
    pc.amplitude = 0.2;
    pc.mode = 4;
    amplitude_state st = make_profile(g, pc, 1);
    CHECK(st.coeffs == make_cosine(g, 0.2, 4).coeffs);

    pc.kind = profile_kind::random_bandlimited;
    pc.band_min = 2;
    pc.band_max = 6;
    CHECK(make_profile(g, pc, 9).coeffs == make_random_bandlimited(g, 0.2, 2, 6, 9).coeffs);

    pc.kind = profile_kind::gaussian_bump;
    pc.center = 0.25;
    pc.width = 0.05;
    CHECK(make_profile(g, pc, 1).coeffs == make_gaussian_bump(g, 0.2, 0.25, 0.05).coeffs);

    profile_config bad;
    bad.kind = profile_kind::cosine;
    bad.mode = 0;
    CHECK_THROWS_AS(make_profile(g, bad, 1), config_error);
    bad.mode = 32; // == N/2 is the Nyquist slot, excluded
    CHECK_THROWS_AS(make_profile(g, bad, 1), config_error);

    profile_config band;
    band.kind = profile_kind::random_bandlimited;
    band.band_min = 5;
    band.band_max = 4;
    CHECK_THROWS_AS(make_profile(g, band, 1), config_error);
    band.band_min = 0;
    band.band_max = 4;
    CHECK_THROWS_AS(make_profile(g, band, 1), config_error);

    profile_config bump;
    bump.kind = profile_kind::gaussian_bump;
    bump.width = 0.0;
    CHECK_THROWS_AS(make_profile(g, bump, 1), config_error);
}

TEST_CASE("profile names round-trip and reject unknowns") {
    for (profile_kind k :
         {profile_kind::cosine, profile_kind::gaussian_bump, profile_kind::random_bandlimited})
        CHECK(profile_from_name(profile_name(k)) == k);
    CHECK_THROWS_AS(profile_from_name("sawtooth"), config_error);
}

TEST_CASE("gaussian source is deterministic and roughly standard") {
    gaussian_source a(7), b(7);
    double mean = 0.0, var = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = a.normal();
        CHECK(x == b.normal());
        mean += x;
        var += x * x;
    }
    mean /= n;
    var = var / n - mean * mean;
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(var - 1.0) < 0.1);
}

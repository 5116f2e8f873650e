#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "surfwave/fft.hpp"
#include "surfwave/spectral.hpp"

using namespace surfwave;

namespace {

double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

std::vector<cplx> random_hermitian(const spectral_grid& g, std::mt19937_64& eng, long band) {
    std::vector<cplx> c(g.n_modes, cplx{0, 0});
    for (long j = 1; j <= band; ++j) {
        const cplx v{uniform(eng, -1.0, 1.0), uniform(eng, -1.0, 1.0)};
        c[g.slot(j)] = v;
        c[g.slot(-j)] = std::conj(v);
    }
    return c;
}

// reference O(N^2) discrete Fourier transform
std::vector<cplx> naive_dft(const std::vector<cplx>& a) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx{0, 0});
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m)
            out[k] += a[m] * std::exp(cplx(0.0, -2.0 * pi * static_cast<double>(k * m) /
                                                    static_cast<double>(n)));
    return out;
}

// evaluate the stored trig series directly at an arbitrary point
cplx direct_eval(const spectral_grid& g, const std::vector<cplx>& c, double theta) {
    cplx acc{0, 0};
    for (std::size_t i = 0; i < g.n_modes; ++i)
        acc += c[i] * std::exp(cplx(0.0, g.k[i] * theta));
    return acc * g.dk;
}

} // namespace

TEST_CASE("fft matches the quadratic-time transform") {
    std::mt19937_64 eng(11);
    for (std::size_t n : {16u, 64u, 128u}) {
        fft_plan plan(n);
        std::vector<cplx> a(n);
        for (auto& v : a) v = {uniform(eng, -1, 1), uniform(eng, -1, 1)};
        auto ref = naive_dft(a);
        std::vector<cplx> got = a;
        plan.forward(got);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
        CHECK(worst <= 1e-11);

        plan.inverse(got);
        worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - a[i]));
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("fft rejects invalid sizes") {
    CHECK_THROWS_AS(fft_plan(0), config_error);
    CHECK_THROWS_AS(fft_plan(1), config_error);
    CHECK_THROWS_AS(fft_plan(48), config_error);
}

TEST_CASE("grid layout and validation") {
    spectral_grid g(16, 2.0 * pi);
    CHECK(g.dk == Catch::Approx(1.0));
    CHECK(g.j[0] == 0);
    CHECK(g.j[1] == 1);
    CHECK(g.j[8] == 8);  // Nyquist slot
    CHECK(g.j[9] == -7);
    CHECK(g.j[15] == -1);
    CHECK(g.slot(-1) == 15);
    CHECK(g.slot(3) == 3);
    CHECK_THROWS_AS(spectral_grid(8, 2.0 * pi), config_error);
    CHECK_THROWS_AS(spectral_grid(48, 2.0 * pi), config_error);
    CHECK_THROWS_AS(spectral_grid(64, -1.0), config_error);
}

TEST_CASE("physical/spectral round trip and Parseval") {
    std::mt19937_64 eng(22);
    spectral_grid g(128, 5.0);
    auto c = random_hermitian(g, eng, 40);
    auto phys = to_physical(g, c);
    auto back = to_spectral(g, phys);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_modes; ++i) worst = std::max(worst, std::abs(back[i] - c[i]));
    CHECK(worst <= 1e-13);

    // integral |phi|^2 d theta = L dk^2 sum |c|^2
    double lhs = 0.0;
    for (double v : phys) lhs += v * v;
    lhs *= g.length / static_cast<double>(g.n_modes);
    double rhs = 0.0;
    for (const auto& v : c) rhs += std::norm(v);
    rhs *= g.length * g.dk * g.dk;
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("physical values match direct series evaluation") {
    std::mt19937_64 eng(23);
    spectral_grid g(64, 2.0 * pi);
    auto c = random_hermitian(g, eng, 20);
    auto phys = to_physical(g, c);
    auto theta = g.theta();
    double worst = 0.0;
    for (std::size_t m = 0; m < g.n_modes; m += 7)
        worst = std::max(worst, std::abs(phys[m] - direct_eval(g, c, theta[m]).real()));
    CHECK(worst <= 1e-13);
}

TEST_CASE("hilbert transform identities") {
    spectral_grid g(64, 2.0 * pi);
    // H[cos(k theta)] = sin(k theta)
    std::vector<cplx> c(g.n_modes, cplx{0, 0});
    const long mode = 3;
    c[g.slot(mode)] = cplx(0.5 / g.dk, 0.0);
    c[g.slot(-mode)] = cplx(0.5 / g.dk, 0.0);
    auto h = hilbert(g, c);
    auto phys = to_physical(g, h);
    auto theta = g.theta();
    double worst = 0.0;
    for (std::size_t m = 0; m < g.n_modes; ++m)
        worst = std::max(worst, std::abs(phys[m] - std::sin(mode * theta[m])));
    CHECK(worst <= 1e-13);

    // H applied twice negates everything except the mean
    std::mt19937_64 eng(24);
    auto r = random_hermitian(g, eng, 30);
    r[0] = cplx(0.7, 0.0); // nonzero mean survives
    auto hh = hilbert(g, hilbert(g, r));
    worst = 0.0;
    for (std::size_t i = 1; i < g.n_modes; ++i) worst = std::max(worst, std::abs(hh[i] + r[i]));
    CHECK(worst <= 1e-14);
    CHECK(std::abs(hh[0]) == 0.0);
}

TEST_CASE("spectral derivative matches finite differences of the direct series") {
    std::mt19937_64 eng(25);
    spectral_grid g(64, 2.0 * pi);
    auto c = random_hermitian(g, eng, 10);
    auto d1 = derivative(g, c, 1);
    auto d2 = derivative(g, c, 2);
    auto p1 = to_physical(g, d1);
    auto p2 = to_physical(g, d2);
    auto theta = g.theta();
    // Separate steps per order: the second difference divides by h^2, so it
    // needs a larger h to keep cancellation noise below truncation error.
    const double h1 = 1e-5, h2 = 1e-4;
    double w1 = 0.0, w2 = 0.0;
    for (std::size_t m = 0; m < g.n_modes; m += 5) {
        const double fm1 = direct_eval(g, c, theta[m] - h1).real();
        const double fp1 = direct_eval(g, c, theta[m] + h1).real();
        w1 = std::max(w1, std::abs(p1[m] - (fp1 - fm1) / (2.0 * h1)));
        const double fm2 = direct_eval(g, c, theta[m] - h2).real();
        const double f0 = direct_eval(g, c, theta[m]).real();
        const double fp2 = direct_eval(g, c, theta[m] + h2).real();
        w2 = std::max(w2, std::abs(p2[m] - (fp2 - 2.0 * f0 + fm2) / (h2 * h2)));
    }
    CHECK(w1 <= 1e-6);
    CHECK(w2 <= 5e-4);
    CHECK_THROWS_AS(derivative(g, c, 3), config_error);
    CHECK_THROWS_AS(derivative(g, c, 0), config_error);
}

TEST_CASE("dealiased product equals the truncated convolution") {
    std::mt19937_64 eng(26);
    spectral_grid g(64, 3.0);
    const long h = static_cast<long>(g.n_modes) / 2 - 1;
    auto a = random_hermitian(g, eng, h); // full band: aliasing would corrupt a plain product
    auto b = random_hermitian(g, eng, h);
    auto got = dealiased_product(g, a, b);

    // reference: O(N^2) convolution with the dk weight, truncated to the band
    std::vector<cplx> ref(g.n_modes, cplx{0, 0});
    for (long j = -h; j <= h; ++j) {
        cplx acc{0, 0};
        for (long m = std::max(j - h, -h); m <= std::min(j + h, h); ++m)
            acc += a[g.slot(j - m)] * b[g.slot(m)];
        ref[g.slot(j)] = acc * g.dk;
    }
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < g.n_modes; ++i) scale = std::max(scale, std::abs(ref[i]));
    for (std::size_t i = 0; i < g.n_modes; ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
    CHECK(worst <= 1e-12 * scale);
    CHECK(std::abs(got[g.nyquist()]) == 0.0);
}

TEST_CASE("product is commutative and bilinear") {
    std::mt19937_64 eng(27);
    spectral_grid g(64, 2.0 * pi);
    auto a = random_hermitian(g, eng, 31);
    auto b = random_hermitian(g, eng, 31);
    auto c = random_hermitian(g, eng, 31);
    auto ab = dealiased_product(g, a, b);
    auto ba = dealiased_product(g, b, a);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_modes; ++i) worst = std::max(worst, std::abs(ab[i] - ba[i]));
    CHECK(worst <= 1e-13);

    std::vector<cplx> bc(g.n_modes);
    for (std::size_t i = 0; i < g.n_modes; ++i) bc[i] = b[i] + 2.0 * c[i];
    auto lhs = dealiased_product(g, a, bc);
    auto rb = dealiased_product(g, a, b);
    auto rc = dealiased_product(g, a, c);
    worst = 0.0;
    for (std::size_t i = 0; i < g.n_modes; ++i)
        worst = std::max(worst, std::abs(lhs[i] - (rb[i] + 2.0 * rc[i])));
    CHECK(worst <= 1e-12);
}

TEST_CASE("band-limited products are pointwise exact") {
    std::mt19937_64 eng(28);
    spectral_grid g(128, 2.0 * pi);
    auto a = random_hermitian(g, eng, 30); // 30 + 30 < 63: no truncation loss
    auto b = random_hermitian(g, eng, 30);
    auto prod = dealiased_product(g, a, b);
    auto pa = to_physical(g, a);
    auto pb = to_physical(g, b);
    auto pp = to_physical(g, prod);
    double worst = 0.0;
    for (std::size_t m = 0; m < g.n_modes; ++m)
        worst = std::max(worst, std::abs(pp[m] - pa[m] * pb[m]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("product commutes with grid translations") {
    std::mt19937_64 eng(29);
    spectral_grid g(64, 2.0 * pi);
    auto a = random_hermitian(g, eng, 31);
    auto b = random_hermitian(g, eng, 31);
    const double shift = 5.0 * g.length / static_cast<double>(g.n_modes);
    auto translate = [&](const std::vector<cplx>& c) {
        std::vector<cplx> out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            out[i] = c[i] * std::exp(cplx(0.0, -g.k[i] * shift));
        return out;
    };
    auto lhs = dealiased_product(g, translate(a), translate(b));
    auto rhs = translate(dealiased_product(g, a, b));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_modes; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("symmetry enforcement and measurement") {
    spectral_grid g(32, 2.0 * pi);
    std::vector<cplx> c(g.n_modes, cplx{0, 0});
    c[g.slot(2)] = cplx(1.0, 0.5);
    c[g.slot(-2)] = cplx(1.0, -0.5) + cplx(3e-3, 1e-3); // broken pair
    c[0] = cplx(0.1, 2e-3);                             // complex mean
    c[g.nyquist()] = cplx(0.0, 4e-3);                   // complex Nyquist
    CHECK(symmetry_violation(g, c) >= 1e-3);
    CHECK_THROWS_AS(require_symmetry(g, c), error);
    enforce_symmetry(g, c);
    CHECK(symmetry_violation(g, c) <= 1e-15);
    CHECK(c[g.nyquist()] == cplx(0.0, 0.0));
    CHECK(c[0].imag() == 0.0);
    CHECK(c[g.slot(2)] == std::conj(c[g.slot(-2)]));
}

TEST_CASE("half-derivative variable transform round trips") {
    std::mt19937_64 eng(30);
    spectral_grid g(64, 2.0 * pi);
    auto phi = random_hermitian(g, eng, 31);
    phi[0] = cplx(0.4, 0.0);
    auto psi = phi_to_psi(g, phi);
    CHECK(std::abs(psi[0]) == 0.0); // mean is annihilated
    for (long j : {1L, 5L, -9L})
        CHECK(std::abs(psi[g.slot(j)] - std::sqrt(std::abs(g.dk * j)) * phi[g.slot(j)]) <= 1e-15);
    auto back = psi_to_phi(g, psi, phi[0].real());
    double worst = 0.0;
    for (std::size_t i = 0; i < g.n_modes; ++i) worst = std::max(worst, std::abs(back[i] - phi[i]));
    CHECK(worst <= 1e-14);
}

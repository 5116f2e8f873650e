#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "surfwave/dispersion.hpp"

using namespace surfwave;

namespace {

double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

// Independent root-count oracle: dense sign scan of the residual over the
// subluminal interval.
int sign_scan_roots(const physical_config& cfg, std::size_t samples) {
    const double lim = 1.0 / cfg.nu;
    const double delta = 1e-9 / cfg.nu;
    int count = 0;
    double prev = dispersion_residual(-lim + delta, cfg);
    for (std::size_t i = 1; i < samples; ++i) {
        const double lam =
            -lim + delta + (2.0 * (lim - delta)) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double f = dispersion_residual(lam, cfg);
        if ((prev < 0.0) != (f < 0.0)) ++count;
        prev = f;
    }
    return count;
}

} // namespace

TEST_CASE("symmetric configuration: frozen two-root oracle") {
    physical_config cfg{0.0, 0.0, 1.0, 0.5};
    root_analysis an = analyze_dispersion(cfg);
    REQUIRE(an.tag == regime::two_roots);
    REQUIRE(an.roots.size() == 2);
    const auto& lo = an.roots[0];
    const auto& hi = an.roots[1];
    CHECK(lo.lambda == Catch::Approx(-0.93956490916664115).epsilon(1e-13));
    CHECK(hi.lambda == Catch::Approx(0.93956490916664115).epsilon(1e-13));
    CHECK(lo.sigma == Catch::Approx(0.88278221853731875).epsilon(1e-13));
    CHECK(lo.d == Catch::Approx(0.88278221853731864).epsilon(1e-13));
    CHECK(lo.usable);
    CHECK(hi.usable);
    CHECK(lo.rescale == Catch::Approx(0.77478957093708101).epsilon(1e-13));
    CHECK(hi.rescale == Catch::Approx(-0.77478957093708101).epsilon(1e-13));
}

TEST_CASE("threshold amplitude and the zero/two root split") {
    physical_config cfg{3.0, 0.5, 1.0, 0.5}; // h1 is the unknown h_star solves for
    const double hs = h_star(cfg);
    CHECK(hs == Catch::Approx(1.6464396587984864).epsilon(1e-12));

    cfg.h1 = 1.5 * hs;
    root_analysis above = analyze_dispersion(cfg);
    REQUIRE(above.tag == regime::two_roots);
    REQUIRE(above.roots.size() == 2);
    CHECK(above.roots[0].lambda == Catch::Approx(0.5226469838814326).epsilon(1e-12));
    CHECK(above.roots[1].lambda == Catch::Approx(1.9834335529278686).epsilon(1e-12));

    cfg.h1 = hs;
    root_analysis at = analyze_dispersion(cfg);
    REQUIRE(at.tag == regime::double_root);
    REQUIRE(at.roots.size() == 1);
    CHECK(at.roots[0].lambda == Catch::Approx(1.7562252823686495).epsilon(1e-9));

    cfg.h1 = 0.8 * hs;
    root_analysis below = analyze_dispersion(cfg);
    CHECK(below.tag == regime::no_root);
    CHECK(below.roots.empty());
    CHECK(below.h_threshold == Catch::Approx(hs).epsilon(1e-12));
}

TEST_CASE("boundary configuration pins the root at the light-cone edge") {
    physical_config cfg{1.0, 3.0, 1.0, 0.5};
    root_analysis an = analyze_dispersion(cfg);
    REQUIRE(an.tag == regime::boundary_root);
    REQUIRE(an.roots.size() == 1);
    CHECK(an.roots[0].lambda == Catch::Approx(-2.0).margin(1e-12));
    CHECK(an.roots[0].sigma == 0.0);
    CHECK_FALSE(an.roots[0].usable);
}

TEST_CASE("moderate-field single and double root oracles") {
    // (v, B) with H = 1, nu = 0.5
    {
        physical_config cfg{1.0, 1.5, 1.0, 0.5};
        auto roots = find_roots(cfg);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].lambda == Catch::Approx(-0.78064011905066555).epsilon(1e-12));
    }
    {
        physical_config cfg{0.0, 0.5, 1.0, 0.5};
        auto roots = find_roots(cfg);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].lambda == Catch::Approx(-1.0494194630786737).epsilon(1e-12));
        CHECK(roots[1].lambda == Catch::Approx(1.0494194630786737).epsilon(1e-12));
    }
    {
        physical_config cfg{0.5, 1.0, 1.0, 0.5};
        auto roots = find_roots(cfg);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].lambda == Catch::Approx(-0.87786769359649008).epsilon(1e-12));
        CHECK(roots[1].lambda == Catch::Approx(1.72664338548956).epsilon(1e-12));
    }
    {
        physical_config cfg{1.5, 0.6, 1.0, 0.5};
        auto roots = find_roots(cfg);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].lambda == Catch::Approx(0.34006981244860068).epsilon(1e-12));
    }
}

TEST_CASE("roots satisfy the residual equation and classification matches a sign scan") {
    std::mt19937_64 eng(20260816);
    for (int trial = 0; trial < 60; ++trial) {
        physical_config cfg{uniform(eng, -2.0, 2.0), uniform(eng, -1.5, 1.5), uniform(eng, 0.2, 2.0),
                            uniform(eng, 0.2, 1.5)};
        // keep away from the measure-zero boundary case
        if (std::abs(std::abs(cfg.b1) - (std::abs(cfg.v1) + 1.0 / cfg.nu)) < 1e-3) continue;
        root_analysis an = analyze_dispersion(cfg);
        if (an.tag == regime::double_root) continue; // tangency is untestable by sign scan
        const int scanned = sign_scan_roots(cfg, 200000);
        int expected = 0;
        if (an.tag == regime::one_root) expected = 1;
        if (an.tag == regime::two_roots) expected = 2;
        CAPTURE(cfg.v1, cfg.b1, cfg.h1, cfg.nu, regime_name(an.tag));
        CHECK(scanned == expected);
        for (const auto& r : an.roots) {
            CHECK(std::abs(dispersion_residual(r.lambda, cfg)) <=
                  1e-9 * (1.0 + cfg.v1 * cfg.v1 + cfg.b1 * cfg.b1 + cfg.h1 * cfg.h1));
            CHECK(std::abs(r.sigma - sigma_of(r.lambda, cfg.nu)) <= 1e-14);
        }
    }
}

TEST_CASE("rescale factor matches a finite-difference derivative") {
    std::mt19937_64 eng(424242);
    int tested = 0;
    while (tested < 25) {
        physical_config cfg{uniform(eng, -1.0, 1.0), uniform(eng, -1.0, 1.0), uniform(eng, 0.3, 1.5),
                            uniform(eng, 0.3, 1.0)};
        root_analysis an = analyze_dispersion(cfg);
        for (const auto& r : an.roots) {
            if (!r.usable) continue;
            // rescale = -(1+sigma)/A with A = f'(lambda)/d
            const double h = 1e-6;
            const double fp =
                (dispersion_residual(r.lambda + h, cfg) - dispersion_residual(r.lambda - h, cfg)) /
                (2.0 * h);
            const double a_fd = fp / r.d;
            const double a_impl = -(1.0 + r.sigma) / r.rescale;
            CAPTURE(cfg.v1, cfg.b1, cfg.h1, cfg.nu, r.lambda);
            CHECK(a_impl == Catch::Approx(a_fd).epsilon(1e-5));
            CHECK(r.rescale == Catch::Approx(time_rescale_factor(r, cfg)).epsilon(1e-14));
            ++tested;
        }
    }
}

TEST_CASE("input validation and preconditions") {
    CHECK_THROWS_AS((physical_config{0.0, 0.0, 1.0, -0.5}.validate()), config_error);
    CHECK_THROWS_AS((physical_config{0.0, 0.0, 1.0, 0.0}.validate()), config_error);
    CHECK_THROWS_AS(sigma_of(3.0, 0.5), precondition_error); // beyond the light cone
    CHECK(sigma_of(2.0, 0.5) == Catch::Approx(0.0).margin(1e-15));
    CHECK(sigma_of(0.0, 0.5) == 1.0);

    // boundary root has sigma = 0, so the rescale prefactor is undefined
    physical_config cfg{1.0, 3.0, 1.0, 0.5};
    auto roots = find_roots(cfg);
    REQUIRE(roots.size() == 1);
    CHECK_THROWS_AS(time_rescale_factor(roots[0], cfg), precondition_error);
}

TEST_CASE("threshold is monotone: larger drive closes the gap") {
    physical_config cfg{2.5, 0.3, 1.0, 0.6};
    const double hs = h_star(cfg);
    REQUIRE(hs > 0.0);
    cfg.h1 = 1.01 * hs;
    CHECK(analyze_dispersion(cfg).tag == regime::two_roots);
    cfg.h1 = 0.99 * hs;
    CHECK(analyze_dispersion(cfg).tag == regime::no_root);
}

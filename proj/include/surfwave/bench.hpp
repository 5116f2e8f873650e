#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "surfwave/manifest.hpp"
#include "surfwave/profiles.hpp"
#include "surfwave/solver.hpp"
#include "surfwave/spectral.hpp"
#include "surfwave/util.hpp"

namespace surfwave {

struct bench_row {
    std::size_t n_modes = 0;
    std::string path;
    double cold_ns = 0.0; // first invocation (cache-cold)
    double warm_ns = 0.0; // median of repeated invocations
    double step_ns = 0.0; // one full RK4 step with cached workspaces
};

struct bench_fit {
    std::string path;
    double exponent = std::numeric_limits<double>::quiet_NaN();
};

struct bench_report {
    std::vector<bench_row> rows;
    std::vector<bench_fit> fits;

    std::string tsv() const {
        std::string out = "n_modes\tpath\tcold_ns\twarm_ns\tstep_ns\n";
        for (const auto& r : rows) {
            out += std::to_string(r.n_modes);
            out += '\t';
            out += r.path;
            out += '\t';
            out += fmt_double(r.cold_ns);
            out += '\t';
            out += fmt_double(r.warm_ns);
            out += '\t';
            out += fmt_double(r.step_ns);
            out += '\n';
        }
        for (const auto& f : fits) {
            out += "exponent\t";
            out += f.path;
            out += '\t';
            out += fmt_double(f.exponent);
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline double now_ns() {
    return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                   std::chrono::steady_clock::now().time_since_epoch())
                                   .count());
}

// Times one call cold, then repeats until the sample budget or time budget is
// exhausted and reports the median, which is robust against scheduler noise.
template <typename F>
std::pair<double, double> time_cold_warm(F&& f, std::size_t max_calls, double budget_ns) {
    double t0 = now_ns();
    f();
    const double cold = now_ns() - t0;

    std::vector<double> samples;
    samples.reserve(max_calls);
    const double start = now_ns();
    while (samples.size() < max_calls && (samples.size() < 3 || now_ns() - start < budget_ns)) {
        t0 = now_ns();
        f();
        samples.push_back(now_ns() - t0);
    }
    std::sort(samples.begin(), samples.end());
    const double warm = samples[samples.size() / 2];
    return {cold, warm};
}

// least-squares slope of log(time) against log(n)
inline double loglog_slope(const std::vector<std::pair<std::size_t, double>>& pts) {
    if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0;
    for (const auto& [n, t] : pts) {
        sx += std::log(static_cast<double>(n));
        sy += std::log(t);
    }
    const double mx = sx / static_cast<double>(pts.size());
    const double my = sy / static_cast<double>(pts.size());
    double num = 0, den = 0;
    for (const auto& [n, t] : pts) {
        const double dx = std::log(static_cast<double>(n)) - mx;
        num += dx * (std::log(t) - my);
        den += dx * dx;
    }
    return num / den;
}

} // namespace detail

inline bench_report run_bench(const bench_config& bc) {
    bench_report rep;
    std::vector<std::pair<std::size_t, double>> pts_spec, pts_spat;

    volatile double sink = 0.0; // defeats dead-code elimination of the timed calls
    for (std::size_t n : bc.sizes) {
        const spectral_grid g(n, 2.0 * pi);
        profile_config pc;
        pc.kind = profile_kind::cosine;
        pc.amplitude = 0.1;
        pc.mode = 1;
        const amplitude_state base = make_profile(g, pc, 0);

        const std::size_t reps = std::max<std::size_t>(bc.reps, 5);
        const double budget = 5e7; // 50 ms sampling budget per path

        {
            auto [cold, warm] = detail::time_cold_warm(
                [&] {
                    auto out = rhs_spectral_convolution(g, base.coeffs);
                    sink = sink + out[1].real();
                },
                reps * 4, budget);
            integrator integ(g, formulation::spectral_convolution);
            auto [sc, sw] = detail::time_cold_warm(
                [&] {
                    amplitude_state st = base;
                    sink = sink + integ.step(st, 0.5, 1e30);
                },
                reps, budget);
            (void)sc;
            rep.rows.push_back({n, "rhs_spectral_convolution", cold, warm, sw});
            pts_spec.emplace_back(n, warm);
        }
        {
            auto [cold, warm] = detail::time_cold_warm(
                [&] {
                    auto out = rhs_spatial(g, base.coeffs, spatial_variant::hilbert_square);
                    sink = sink + out[1].real();
                },
                reps * 4, budget);
            integrator integ(g, formulation::spatial_hilbert);
            auto [sc, sw] = detail::time_cold_warm(
                [&] {
                    amplitude_state st = base;
                    sink = sink + integ.step(st, 0.5, 1e30);
                },
                reps, budget);
            (void)sc;
            rep.rows.push_back({n, "rhs_spatial", cold, warm, sw});
            pts_spat.emplace_back(n, warm);
        }
    }

    rep.fits.push_back({"rhs_spectral_convolution", detail::loglog_slope(pts_spec)});
    rep.fits.push_back({"rhs_spatial", detail::loglog_slope(pts_spat)});
    return rep;
}

} // namespace surfwave

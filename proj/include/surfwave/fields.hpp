#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "surfwave/dispersion.hpp"
#include "surfwave/spectral.hpp"
#include "surfwave/util.hpp"

namespace surfwave {

// Normalized plasma eigenvector R = (lambda - v1, i(lambda - v1), -B1, -iB1, d)
// of the first-order interior system, components ordered (v1, v2, B1, B2, q).
struct plasma_eigenvector {
    std::array<cplx, 5> r{};
};

namespace detail {

// (i A - B) R for the 5x5 symbol matrices of the first-order system; used as
// the construction residual.
inline std::array<cplx, 5> eigensystem_residual(const plasma_eigenvector& ev, double lambda,
                                                const physical_config& cfg) {
    double m = lambda - cfg.v1;
    double b = cfg.b1;
    const std::array<cplx, 5>& r = ev.r;
    std::array<cplx, 5> ar{
        m * r[0] + b * r[2] - r[4],
        m * r[1] + b * r[3],
        b * r[0] + m * r[2],
        b * r[1] + m * r[3],
        -r[0],
    };
    std::array<cplx, 5> br{0.0, -r[4], 0.0, 0.0, -r[1]};
    std::array<cplx, 5> out{};
    for (std::size_t i = 0; i < 5; ++i) out[i] = cplx(0.0, 1.0) * ar[i] - br[i];
    return out;
}

} // namespace detail

inline plasma_eigenvector build_eigenvector(const dispersion_root& root, const physical_config& cfg) {
    if (!root.usable) throw precondition_error("build_eigenvector requires a usable root");
    double m = root.lambda - cfg.v1;
    plasma_eigenvector ev;
    ev.r = {cplx(m, 0.0), cplx(0.0, m), cplx(-cfg.b1, 0.0), cplx(0.0, -cfg.b1), cplx(root.d, 0.0)};
    auto res = detail::eigensystem_residual(ev, root.lambda, cfg);
    double worst = 0.0;
    for (auto& v : res) worst = std::max(worst, std::abs(v));
    if (worst > 1e-10) throw error("eigenvector construction residual exceeds 1e-10");
    return ev;
}

// Spectral rows of the five first-order plasma fields at interior depth
// eta > 0: U_hat(k, eta) = -|k| phi_hat(k) e^{-|k| eta} R(k), with R(k) = R
// for k > 0 and conj(R) for k < 0; the mean column is zero.
inline std::array<std::vector<cplx>, 5> plasma_first_order(const spectral_grid& g,
                                                           const std::vector<cplx>& phi,
                                                           const dispersion_root& root,
                                                           const physical_config& cfg, double eta) {
    if (!(eta > 0.0)) throw precondition_error("plasma_first_order requires eta > 0");
    plasma_eigenvector ev = build_eigenvector(root, cfg);
    std::array<std::vector<cplx>, 5> rows;
    for (auto& row : rows) row.assign(g.n_modes, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < g.n_modes; ++i) {
        if (g.j[i] == 0) continue;
        double ak = std::abs(g.k[i]);
        cplx factor = -ak * phi[i] * std::exp(-ak * eta);
        for (std::size_t comp = 0; comp < 5; ++comp)
            rows[comp][i] = factor * (g.k[i] > 0.0 ? ev.r[comp] : std::conj(ev.r[comp]));
    }
    return rows;
}

// Spectral rows of the vacuum fields (H1, H2, E) at depth eta < 0:
// V_hat(k, eta) = H1 phi_hat(k) e^{sigma |k| eta} (-sigma |k|, ik, -i nu lambda k).
// The exponent decays uniformly as eta -> -infinity for both signs of k.
inline std::array<std::vector<cplx>, 3> vacuum_first_order(const spectral_grid& g,
                                                           const std::vector<cplx>& phi,
                                                           const dispersion_root& root,
                                                           const physical_config& cfg, double eta) {
    if (!(eta < 0.0)) throw precondition_error("vacuum_first_order requires eta < 0");
    if (!(root.sigma > 0.0)) throw precondition_error("vacuum_first_order requires sigma > 0");
    std::array<std::vector<cplx>, 3> rows;
    for (auto& row : rows) row.assign(g.n_modes, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < g.n_modes; ++i) {
        if (g.j[i] == 0) continue;
        double k = g.k[i];
        double ak = std::abs(k);
        cplx factor = cfg.h1 * phi[i] * std::exp(root.sigma * ak * eta);
        rows[0][i] = factor * (-root.sigma * ak);
        rows[1][i] = factor * cplx(0.0, k);
        rows[2][i] = factor * cplx(0.0, -cfg.nu * root.lambda * k);
    }
    return rows;
}

// Max-over-k residuals of the five linearized jump conditions at eta = 0:
//   (lambda - v1) ik phi + U2,  ik B1 phi - U4,  ik H1 phi - V2,
//   U5 - H1 V1,  V3 + i nu lambda k H1 phi.
inline std::array<double, 5> jump_residuals(const spectral_grid& g, const std::vector<cplx>& phi,
                                            const dispersion_root& root, const physical_config& cfg) {
    plasma_eigenvector ev = build_eigenvector(root, cfg);
    std::array<double, 5> worst{};
    for (std::size_t i = 0; i < g.n_modes; ++i) {
        if (g.j[i] == 0) continue;
        double k = g.k[i];
        double ak = std::abs(k);
        cplx ufac = -ak * phi[i];
        std::array<cplx, 5> u;
        for (std::size_t comp = 0; comp < 5; ++comp)
            u[comp] = ufac * (k > 0.0 ? ev.r[comp] : std::conj(ev.r[comp]));
        cplx vfac = cfg.h1 * phi[i];
        cplx v1 = vfac * (-root.sigma * ak);
        cplx v2 = vfac * cplx(0.0, k);
        cplx v3 = vfac * cplx(0.0, -cfg.nu * root.lambda * k);
        cplx ikphi = cplx(0.0, k) * phi[i];
        std::array<cplx, 5> res{
            (root.lambda - cfg.v1) * ikphi + u[1],
            cfg.b1 * ikphi - u[3],
            cfg.h1 * ikphi - v2,
            u[4] - cfg.h1 * v1,
            v3 + cfg.nu * root.lambda * cfg.h1 * ikphi,
        };
        for (std::size_t t = 0; t < 5; ++t) worst[t] = std::max(worst[t], std::abs(res[t]));
    }
    return worst;
}

struct field_snapshot {
    std::vector<double> grid_theta;
    std::vector<double> eta_plasma;               // eta > 0 rows
    std::vector<double> eta_vacuum;               // eta < 0 rows
    std::array<std::vector<double>, 5> u1;        // row-major [eta][theta] per component
    std::array<std::vector<double>, 3> v1;        // row-major [eta][theta] per component
    std::vector<double> interface_x2;             // epsilon * phi(theta)
    double epsilon = 0.0;
    static constexpr const char* u_names[5] = {"v1", "v2", "B1", "B2", "q"};
    static constexpr const char* v_names[3] = {"H1", "H2", "E"};
};

// Physical-space reconstruction over the collocation theta grid and the given
// eta rows (positive rows sample the plasma side, negative the vacuum side;
// eta = 0 belongs to neither region).
inline field_snapshot render_snapshot(const spectral_grid& g, const std::vector<cplx>& phi,
                                      const dispersion_root& root, const physical_config& cfg,
                                      const std::vector<double>& eta_grid, double epsilon) {
    field_snapshot snap;
    snap.grid_theta = g.theta();
    snap.epsilon = epsilon;
    for (double e : eta_grid) {
        if (e > 0.0)
            snap.eta_plasma.push_back(e);
        else if (e < 0.0)
            snap.eta_vacuum.push_back(e);
        else
            throw precondition_error("render_snapshot: eta = 0 is not inside either region");
    }
    std::vector<cplx> tmp = phi;
    enforce_symmetry(g, tmp);
    snap.interface_x2 = to_physical(g, tmp);
    for (double& x : snap.interface_x2) x *= epsilon;

    for (double e : snap.eta_plasma) {
        auto rows = plasma_first_order(g, tmp, root, cfg, e);
        for (std::size_t comp = 0; comp < 5; ++comp) {
            std::vector<double> phys = to_physical(g, rows[comp]);
            snap.u1[comp].insert(snap.u1[comp].end(), phys.begin(), phys.end());
        }
    }
    for (double e : snap.eta_vacuum) {
        auto rows = vacuum_first_order(g, tmp, root, cfg, e);
        for (std::size_t comp = 0; comp < 3; ++comp) {
            std::vector<double> phys = to_physical(g, rows[comp]);
            snap.v1[comp].insert(snap.v1[comp].end(), phys.begin(), phys.end());
        }
    }
    return snap;
}

} // namespace surfwave

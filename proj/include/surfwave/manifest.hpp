#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfwave/analysis.hpp"
#include "surfwave/dispersion.hpp"
#include "surfwave/profiles.hpp"
#include "surfwave/solver.hpp"
#include "surfwave/spectral.hpp"
#include "surfwave/util.hpp"
#include "surfwave/version.hpp"

namespace surfwave {

using ordered_json = nlohmann::ordered_json;

struct grid_config {
    std::size_t n_modes = 256;
    double length = 2.0 * pi;
};

struct fields_config {
    double epsilon = 0.1;
    double eta_max = 2.0;
    std::size_t n_eta = 8; // rows per side

    void validate() const {
        if (!(epsilon >= 0.0)) throw config_error("fields.epsilon must be >= 0");
        if (!(eta_max > 0.0)) throw config_error("fields.eta_max must be > 0");
        if (n_eta == 0) throw config_error("fields.n_eta must be positive");
    }
};

struct verify_config {
    std::size_t samples = 100000;
    std::vector<double> sigmas{0.1, 0.5, 1.0};

    void validate() const {
        if (samples == 0) throw config_error("verify.samples must be positive");
        if (sigmas.empty()) throw config_error("verify.sigmas must be nonempty");
        for (double s : sigmas)
            if (!(s > 0.0 && s <= 1.0)) throw config_error("verify.sigmas must lie in (0, 1]");
    }
};

struct bench_config {
    std::vector<std::size_t> sizes{256, 1024, 4096};
    std::size_t reps = 5;
};

// Full run configuration: flat key = value text with '#' comments and a
// mandatory schema line.
struct run_config {
    physical_config physical{0.0, 0.0, 1.0, 0.5};
    long root_index = -1; // -1 = unset; required when several roots exist
    grid_config grid;
    solver_config solver;
    profile_config profile;
    norm_ladder norms;
    std::uint64_t seed = 42;
    fields_config fields;
    verify_config verify;
    bench_config bench;

    void validate() const {
        physical.validate();
        solver.validate();
        norms.validate();
        fields.validate();
        verify.validate();
        if (grid.n_modes < 16 || (grid.n_modes & (grid.n_modes - 1)) != 0)
            throw config_error("grid.n_modes must be a power of two >= 16");
        if (!(grid.length > 0.0)) throw config_error("grid.length must be > 0");
        profile.validate(grid.n_modes);
    }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw config_error("");
        return d;
    } catch (...) {
        throw config_error("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

inline long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw config_error("");
        return d;
    } catch (...) {
        throw config_error("config key '" + key + "': expected an integer, got '" + v + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw config_error("");
        return d;
    } catch (...) {
        throw config_error("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw config_error("config key '" + key + "': expected true/false, got '" + v + "'");
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& key, const std::string& v, Fn&& one) {
    std::vector<T> out;
    for (const std::string& part : split(v, ','))
        if (!part.empty()) out.push_back(one(key, part));
    if (out.empty()) throw config_error("config key '" + key + "': empty list");
    return out;
}

} // namespace detail

inline run_config parse_config_text(const std::string& text) {
    run_config rc;
    bool schema_seen = false;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error("config line " + std::to_string(lineno) + ": empty key or value");

        using namespace detail;
        if (key == "schema") {
            if (val != config_schema)
                throw config_error("unsupported config schema '" + val + "' (expected " +
                                   std::string(config_schema) + ")");
            schema_seen = true;
        } else if (key == "physical.v1") {
            rc.physical.v1 = parse_double(key, val);
        } else if (key == "physical.b1") {
            rc.physical.b1 = parse_double(key, val);
        } else if (key == "physical.h1") {
            rc.physical.h1 = parse_double(key, val);
        } else if (key == "physical.nu") {
            rc.physical.nu = parse_double(key, val);
        } else if (key == "physical.root_index") {
            rc.root_index = parse_long(key, val);
        } else if (key == "grid.n_modes") {
            rc.grid.n_modes = static_cast<std::size_t>(parse_u64(key, val));
        } else if (key == "grid.length") {
            rc.grid.length = parse_double(key, val);
        } else if (key == "solver.formulation") {
            rc.solver.form = formulation_from_name(val);
        } else if (key == "solver.dt_safety") {
            rc.solver.dt_safety = parse_double(key, val);
        } else if (key == "solver.t_end") {
            rc.solver.t_end = parse_double(key, val);
        } else if (key == "solver.max_steps") {
            rc.solver.max_steps = static_cast<std::size_t>(parse_u64(key, val));
        } else if (key == "solver.stop_on_blowup") {
            rc.solver.stop_on_blowup = parse_bool(key, val);
        } else if (key == "solver.gradient_factor") {
            rc.solver.gradient_factor = parse_double(key, val);
        } else if (key == "solver.drift_tol") {
            rc.solver.drift_tol = parse_double(key, val);
        } else if (key == "profile.kind") {
            rc.profile.kind = profile_from_name(val);
        } else if (key == "profile.amplitude") {
            rc.profile.amplitude = parse_double(key, val);
        } else if (key == "profile.mode") {
            rc.profile.mode = parse_long(key, val);
        } else if (key == "profile.center") {
            rc.profile.center = parse_double(key, val);
        } else if (key == "profile.width") {
            rc.profile.width = parse_double(key, val);
        } else if (key == "profile.band_min") {
            rc.profile.band_min = parse_long(key, val);
        } else if (key == "profile.band_max") {
            rc.profile.band_max = parse_long(key, val);
        } else if (key == "norms.s_values") {
            rc.norms.s_values = parse_list<double>(key, val, parse_double);
        } else if (key == "norms.s_prime") {
            rc.norms.s_prime = parse_double(key, val);
        } else if (key == "seed") {
            rc.seed = parse_u64(key, val);
        } else if (key == "output.diag_every") {
            rc.solver.diag_every = static_cast<std::size_t>(parse_u64(key, val));
        } else if (key == "output.snapshot_every") {
            rc.solver.snapshot_every = static_cast<std::size_t>(parse_u64(key, val));
        } else if (key == "fields.epsilon") {
            rc.fields.epsilon = parse_double(key, val);
        } else if (key == "fields.eta_max") {
            rc.fields.eta_max = parse_double(key, val);
        } else if (key == "fields.n_eta") {
            rc.fields.n_eta = static_cast<std::size_t>(parse_u64(key, val));
        } else if (key == "verify.samples") {
            rc.verify.samples = static_cast<std::size_t>(parse_u64(key, val));
        } else if (key == "verify.sigmas") {
            rc.verify.sigmas = parse_list<double>(key, val, parse_double);
        } else if (key == "bench.sizes") {
            auto v = parse_list<long>(key, val, parse_long);
            rc.bench.sizes.clear();
            for (long s : v) {
                if (s < 16) throw config_error("bench.sizes entries must be >= 16");
                rc.bench.sizes.push_back(static_cast<std::size_t>(s));
            }
        } else if (key == "bench.reps") {
            rc.bench.reps = static_cast<std::size_t>(parse_u64(key, val));
        } else {
            throw config_error("unknown config key '" + key + "'");
        }
    }
    if (!schema_seen) throw config_error("config is missing 'schema = " + std::string(config_schema) + "'");
    rc.validate();
    return rc;
}

inline run_config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// FNV-1a over the canonical serialization of every evolution-affecting field.
inline std::uint64_t config_hash(const run_config& rc) {
    std::map<std::string, std::string> kv;
    kv["physical.v1"] = fmt_double(rc.physical.v1);
    kv["physical.b1"] = fmt_double(rc.physical.b1);
    kv["physical.h1"] = fmt_double(rc.physical.h1);
    kv["physical.nu"] = fmt_double(rc.physical.nu);
    kv["physical.root_index"] = std::to_string(rc.root_index);
    kv["grid.n_modes"] = std::to_string(rc.grid.n_modes);
    kv["grid.length"] = fmt_double(rc.grid.length);
    kv["solver.formulation"] = formulation_name(rc.solver.form);
    kv["solver.dt_safety"] = fmt_double(rc.solver.dt_safety);
    kv["solver.t_end"] = fmt_double(rc.solver.t_end);
    kv["solver.max_steps"] = std::to_string(rc.solver.max_steps);
    kv["solver.stop_on_blowup"] = rc.solver.stop_on_blowup ? "true" : "false";
    kv["solver.gradient_factor"] = fmt_double(rc.solver.gradient_factor);
    kv["solver.drift_tol"] = fmt_double(rc.solver.drift_tol);
    kv["profile.kind"] = profile_name(rc.profile.kind);
    kv["profile.amplitude"] = fmt_double(rc.profile.amplitude);
    kv["profile.mode"] = std::to_string(rc.profile.mode);
    kv["profile.center"] = fmt_double(rc.profile.center);
    kv["profile.width"] = fmt_double(rc.profile.width);
    kv["profile.band_min"] = std::to_string(rc.profile.band_min);
    kv["profile.band_max"] = std::to_string(rc.profile.band_max);
    kv["seed"] = std::to_string(rc.seed);
    std::string canon;
    for (const auto& [k, v] : kv) {
        canon += k;
        canon += '=';
        canon += v;
        canon += '\n';
    }
    return fnv1a64(canon);
}

inline ordered_json manifest_json(const run_config& rc, const root_analysis& analysis, long chosen_root) {
    ordered_json m;
    m["schema"] = "surfwave-manifest/1";
    m["artifact_version"] = artifact_version;
    m["config_hash"] = hex64(config_hash(rc));
    m["physical"] = {{"v1", rc.physical.v1},
                     {"b1", rc.physical.b1},
                     {"h1", rc.physical.h1},
                     {"nu", rc.physical.nu}};
    m["chosen_root_index"] = chosen_root;
    m["regime"] = regime_name(analysis.tag);
    ordered_json roots = ordered_json::array();
    for (const auto& r : analysis.roots) {
        ordered_json jr;
        jr["lambda"] = r.lambda;
        jr["sigma"] = r.sigma;
        jr["d"] = r.d;
        jr["regime"] = regime_name(r.tag);
        jr["usable"] = r.usable;
        if (r.usable) jr["rescale"] = r.rescale;
        roots.push_back(jr);
    }
    m["roots"] = roots;
    if (std::isfinite(analysis.h_threshold)) m["h_threshold"] = analysis.h_threshold;
    m["grid"] = {{"n_modes", rc.grid.n_modes}, {"length", rc.grid.length}};
    m["solver"] = {{"formulation", formulation_name(rc.solver.form)},
                   {"dt_safety", rc.solver.dt_safety},
                   {"t_end", rc.solver.t_end},
                   {"max_steps", rc.solver.max_steps},
                   {"stop_on_blowup", rc.solver.stop_on_blowup},
                   {"gradient_factor", rc.solver.gradient_factor},
                   {"drift_tol", rc.solver.drift_tol}};
    ordered_json prof;
    prof["kind"] = profile_name(rc.profile.kind);
    prof["amplitude"] = rc.profile.amplitude;
    if (rc.profile.kind == profile_kind::cosine) prof["mode"] = rc.profile.mode;
    if (rc.profile.kind == profile_kind::gaussian_bump) {
        prof["center"] = rc.profile.center;
        prof["width"] = rc.profile.width;
    }
    if (rc.profile.kind == profile_kind::random_bandlimited) {
        prof["band_min"] = rc.profile.band_min;
        prof["band_max"] = rc.profile.band_max;
    }
    m["profile"] = prof;
    m["norms"] = {{"s_values", rc.norms.s_values}, {"s_prime", rc.norms.s_prime}};
    m["seed"] = rc.seed;
    m["output"] = {{"diag_every", rc.solver.diag_every}, {"snapshot_every", rc.solver.snapshot_every}};
    return m;
}

// --- diagnostics stream (NDJSON) ---------------------------------------------

inline std::string diagnostics_header_line(const run_config& rc) {
    ordered_json h;
    h["schema"] = diagnostics_schema;
    h["config_hash"] = hex64(config_hash(rc));
    h["artifact_version"] = artifact_version;
    h["n_modes"] = rc.grid.n_modes;
    h["length"] = rc.grid.length;
    return h.dump();
}

inline std::string diagnostics_line(const step_diagnostics& d) {
    ordered_json o;
    o["tau"] = d.tau;
    o["psi_l2"] = d.psi_l2;
    o["sup_phi_x"] = d.sup_phi_x;
    ordered_json hs;
    for (const auto& [s, v] : d.hs_norms) hs[fmt_double(s)] = v;
    o["hs"] = hs;
    o["blowup_integral"] = d.blowup_integral;
    return o.dump();
}

// --- snapshot files -----------------------------------------------------------

struct snapshot_payload {
    std::uint64_t n_modes = 0;
    double length = 0.0;
    double tau = 0.0;
    std::uint64_t config_hash = 0;
    std::vector<cplx> coeffs;
};

inline void write_snapshot(const std::string& path, const spectral_grid& g, const amplitude_state& st,
                           std::uint64_t hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open snapshot file for writing: " + path);
    const char magic[4] = {'S', 'W', 'S', 'P'};
    out.write(magic, 4);
    std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    std::uint64_t n = g.n_modes;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&g.length), sizeof g.length);
    out.write(reinterpret_cast<const char*>(&st.tau), sizeof st.tau);
    out.write(reinterpret_cast<const char*>(&hash), sizeof hash);
    for (const cplx& c : st.coeffs) {
        double re = c.real(), im = c.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof re);
        out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
    if (!out) throw error("failed writing snapshot: " + path);
}

inline snapshot_payload read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open snapshot file: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SWSP", 4) != 0)
        throw mismatch_error("not a snapshot file (bad magic): " + path);
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    if (version != 1) throw mismatch_error("unsupported snapshot version in " + path);
    snapshot_payload sp;
    in.read(reinterpret_cast<char*>(&sp.n_modes), sizeof sp.n_modes);
    in.read(reinterpret_cast<char*>(&sp.length), sizeof sp.length);
    in.read(reinterpret_cast<char*>(&sp.tau), sizeof sp.tau);
    in.read(reinterpret_cast<char*>(&sp.config_hash), sizeof sp.config_hash);
    if (!in || sp.n_modes == 0 || sp.n_modes > (1u << 24))
        throw mismatch_error("corrupt snapshot header in " + path);
    sp.coeffs.resize(sp.n_modes);
    for (auto& c : sp.coeffs) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof re);
        in.read(reinterpret_cast<char*>(&im), sizeof im);
        c = cplx(re, im);
    }
    if (!in) throw mismatch_error("truncated snapshot payload in " + path);
    return sp;
}

inline void write_snapshot_csv(const std::string& path, const spectral_grid& g, const amplitude_state& st,
                               std::uint64_t hash) {
    std::ofstream out(path);
    if (!out) throw error("cannot open csv file for writing: " + path);
    out << "# config_hash=" << hex64(hash) << " tau=" << fmt_double(st.tau) << "\n";
    out << "j,k,re,im\n";
    long n = static_cast<long>(g.n_modes);
    for (long j = -n / 2 + 1; j <= n / 2; ++j) {
        const cplx& c = st.coeffs[g.slot(j)];
        out << j << ',' << fmt_double(g.dk * static_cast<double>(j)) << ',' << fmt_double(c.real())
            << ',' << fmt_double(c.imag()) << "\n";
    }
}

} // namespace surfwave

// surfwave: weakly nonlinear surface-wave simulator for a plasma-vacuum
// interface. Subcommands cover dispersion-root analysis, time evolution of the
// interface displacement, kernel verification suites, first-order field
// reconstruction, offline diagnostics, and performance measurement.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfwave/analysis.hpp"
#include "surfwave/bench.hpp"
#include "surfwave/dispersion.hpp"
#include "surfwave/fields.hpp"
#include "surfwave/manifest.hpp"
#include "surfwave/profiles.hpp"
#include "surfwave/solver.hpp"
#include "surfwave/spectral.hpp"
#include "surfwave/verify.hpp"
#include "surfwave/version.hpp"

namespace fs = std::filesystem;
using namespace surfwave;

namespace {

struct cli_options {
    std::string config_path;
    std::string out_dir;
    std::string snapshot_path;
    std::vector<std::string> analyze_snapshots;
    std::string formulation_override;
    std::size_t n_modes_override = 0;
    double length_override = 0.0;
    double t_end_override = 0.0;
    std::uint64_t seed_override = 0;
    std::size_t snapshot_every_override = 0;
    bool mutate_flip = false;
};

run_config load_or_default(const CLI::App* sub, const cli_options& opt) {
    run_config rc;
    if (sub->count("--config")) rc = load_config(opt.config_path);
    return rc;
}

void apply_overrides(const CLI::App* sub, const cli_options& opt, run_config& rc) {
    if (sub->count("--formulation")) rc.solver.form = formulation_from_name(opt.formulation_override);
    if (sub->count("--n-modes")) rc.grid.n_modes = opt.n_modes_override;
    if (sub->count("--length")) rc.grid.length = opt.length_override;
    if (sub->count("--t-end")) rc.solver.t_end = opt.t_end_override;
    if (sub->count("--seed")) rc.seed = opt.seed_override;
    if (sub->count("--snapshot-every")) rc.solver.snapshot_every = opt.snapshot_every_override;
    rc.validate();
}

// Root selection shared by simulate and fields: an explicit index wins; with
// several usable roots and no explicit choice the configuration is ambiguous.
std::pair<root_analysis, long> choose_root(const run_config& rc) {
    root_analysis an = analyze_dispersion(rc.physical);
    if (rc.root_index >= 0) {
        if (static_cast<std::size_t>(rc.root_index) >= an.roots.size())
            throw config_error("physical.root_index " + std::to_string(rc.root_index) +
                               " out of range: " + std::to_string(an.roots.size()) + " root(s) found");
        if (!an.roots[static_cast<std::size_t>(rc.root_index)].usable)
            throw precondition_error("selected dispersion root is not usable (regime " +
                                     std::string(regime_name(an.tag)) + ")");
        return {std::move(an), rc.root_index};
    }
    std::vector<long> usable;
    for (std::size_t i = 0; i < an.roots.size(); ++i)
        if (an.roots[i].usable) usable.push_back(static_cast<long>(i));
    if (usable.empty())
        throw precondition_error("no usable dispersion root (regime " +
                                 std::string(regime_name(an.tag)) + ")");
    if (usable.size() > 1)
        throw config_error("several usable dispersion roots; set physical.root_index to pick one");
    return {std::move(an), usable.front()};
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw error("cannot open output file: " + path.string());
    out << text;
    if (!out) throw error("failed writing output file: " + path.string());
}

std::string snapshot_name(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%06zu", step);
    return buf;
}

// --- subcommand bodies ---------------------------------------------------------

int cmd_roots(const run_config& rc) {
    root_analysis an = analyze_dispersion(rc.physical);
    std::cout << "regime\t" << regime_name(an.tag) << "\n";
    if (std::isfinite(an.h_threshold)) std::cout << "h_threshold\t" << fmt_double(an.h_threshold) << "\n";
    std::cout << "index\tlambda\tsigma\td\tregime\trescale\tusable\n";
    for (std::size_t i = 0; i < an.roots.size(); ++i) {
        const auto& r = an.roots[i];
        std::cout << i << '\t' << fmt_double(r.lambda) << '\t' << fmt_double(r.sigma) << '\t'
                  << fmt_double(r.d) << '\t' << regime_name(r.tag) << '\t'
                  << (r.usable ? fmt_double(r.rescale) : std::string("-")) << '\t'
                  << (r.usable ? "yes" : "no") << "\n";
    }
    return 0;
}

int cmd_simulate(const run_config& rc, const std::string& out_dir) {
    auto [analysis, chosen] = choose_root(rc);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    const std::uint64_t hash = config_hash(rc);
    const spectral_grid g(rc.grid.n_modes, rc.grid.length);

    write_text_file(out / "manifest.json", manifest_json(rc, analysis, chosen).dump(2) + "\n");

    amplitude_state initial = make_profile(g, rc.profile, rc.seed);
    write_snapshot((out / (snapshot_name(0) + ".swsp")).string(), g, initial, hash);
    write_snapshot_csv((out / (snapshot_name(0) + ".csv")).string(), g, initial, hash);

    std::ofstream diag(out / "diagnostics.ndjson");
    if (!diag) throw error("cannot open diagnostics stream");
    diag << diagnostics_header_line(rc) << "\n";

    run_callbacks cb;
    cb.on_diag = [&](const step_diagnostics& d) { diag << diagnostics_line(d) << "\n"; };
    cb.on_snapshot = [&](const amplitude_state& st, std::size_t step) {
        if (step == 0) return; // written above
        write_snapshot((out / (snapshot_name(step) + ".swsp")).string(), g, st, hash);
        write_snapshot_csv((out / (snapshot_name(step) + ".csv")).string(), g, st, hash);
    };

    simulation_record rec = run(g, initial, rc.solver, rc.norms, cb);
    diag.close();

    write_snapshot((out / "snapshot_final.swsp").string(), g, rec.final_state, hash);
    write_snapshot_csv((out / "snapshot_final.csv").string(), g, rec.final_state, hash);

    ordered_json stop;
    stop["schema"] = "surfwave-stop/1";
    stop["config_hash"] = hex64(hash);
    stop["reason"] = stop_reason_name(rec.reason);
    stop["steps"] = rec.steps;
    stop["tau"] = rec.final_state.tau;
    stop["psi_l2_drift"] = rec.final_drift;
    const double sup0 = rec.initial_sup_phi_x;
    const double sup1 = sup_gradient(g, rec.final_state.coeffs);
    stop["sup_phi_x_initial"] = sup0;
    stop["sup_phi_x_final"] = sup1;
    stop["sup_phi_x_ratio"] = (sup0 > 0.0) ? sup1 / sup0 : 0.0;
    stop["osc_initial"] = rec.initial_osc;
    stop["osc_final"] = rec.final_osc;
    stop["osc_change"] = (rec.initial_osc > 0.0)
                             ? std::abs(rec.final_osc - rec.initial_osc) / rec.initial_osc
                             : 0.0;
    write_text_file(out / "stop.json", stop.dump(2) + "\n");

    std::cout << "stop reason: " << stop_reason_name(rec.reason) << " at tau=" << fmt_double(rec.final_state.tau)
              << " after " << rec.steps << " step(s)\n";
    return 0;
}

int cmd_verify(const run_config& rc, bool mutate_flip) {
    const mutation mut = mutate_flip ? mutation::flip_sym_sign : mutation::none;
    verify_report rep = run_verify_suites(rc, mut);
    std::cout << rep.tsv();
    std::cout << (rep.all_pass() ? "ALL PASS\n" : "FAILURES PRESENT\n");
    return rep.all_pass() ? 0 : 1;
}

int cmd_fields(const run_config& rc, const std::string& snapshot_path, const std::string& out_dir) {
    snapshot_payload snap = read_snapshot(snapshot_path);
    if (snap.n_modes != rc.grid.n_modes || snap.length != rc.grid.length)
        throw mismatch_error("snapshot grid (" + std::to_string(snap.n_modes) + ", " +
                             fmt_double(snap.length) + ") does not match config grid (" +
                             std::to_string(rc.grid.n_modes) + ", " + fmt_double(rc.grid.length) + ")");
    const std::uint64_t hash = config_hash(rc);
    if (snap.config_hash != hash)
        throw mismatch_error("snapshot config hash " + hex64(snap.config_hash) +
                             " does not match config " + hex64(hash));

    auto [analysis, chosen] = choose_root(rc);
    const dispersion_root& root = analysis.roots[static_cast<std::size_t>(chosen)];
    const spectral_grid g(rc.grid.n_modes, rc.grid.length);

    std::vector<double> eta_grid;
    for (std::size_t i = 0; i < rc.fields.n_eta; ++i) {
        const double e =
            rc.fields.eta_max * (static_cast<double>(i) + 1.0) / static_cast<double>(rc.fields.n_eta);
        eta_grid.push_back(e);
        eta_grid.push_back(-e);
    }
    field_snapshot fields = render_snapshot(g, snap.coeffs, root, rc.physical, eta_grid, rc.fields.epsilon);

    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    // long-format CSV: one row per (field, theta, eta)
    {
        std::ofstream csv(out / "fields.csv");
        if (!csv) throw error("cannot open fields.csv");
        csv << "# config_hash=" << hex64(hash) << " tau=" << fmt_double(snap.tau) << "\n";
        csv << "field,theta,eta,value\n";
        const std::size_t nt = fields.grid_theta.size();
        auto emit = [&](const char* name, const std::vector<double>& eta_rows,
                        const std::vector<double>& data) {
            for (std::size_t r = 0; r < eta_rows.size(); ++r)
                for (std::size_t t = 0; t < nt; ++t)
                    csv << name << ',' << fmt_double(fields.grid_theta[t]) << ','
                        << fmt_double(eta_rows[r]) << ',' << fmt_double(data[r * nt + t]) << "\n";
        };
        for (std::size_t c = 0; c < 5; ++c) emit(field_snapshot::u_names[c], fields.eta_plasma, fields.u1[c]);
        for (std::size_t c = 0; c < 3; ++c) emit(field_snapshot::v_names[c], fields.eta_vacuum, fields.v1[c]);
        for (std::size_t t = 0; t < nt; ++t)
            csv << "interface," << fmt_double(fields.grid_theta[t]) << ",0,"
                << fmt_double(fields.interface_x2[t]) << "\n";
    }

    // compact binary mirror of the same grids and samples
    {
        std::ofstream bin(out / "fields.bin", std::ios::binary);
        if (!bin) throw error("cannot open fields.bin");
        const char magic[4] = {'S', 'W', 'F', 'D'};
        bin.write(magic, 4);
        std::uint32_t version = 1;
        bin.write(reinterpret_cast<const char*>(&version), sizeof version);
        bin.write(reinterpret_cast<const char*>(&hash), sizeof hash);
        auto write_u64 = [&](std::uint64_t v) { bin.write(reinterpret_cast<const char*>(&v), sizeof v); };
        auto write_vec = [&](const std::vector<double>& v) {
            write_u64(v.size());
            bin.write(reinterpret_cast<const char*>(v.data()),
                      static_cast<std::streamsize>(v.size() * sizeof(double)));
        };
        write_vec(fields.grid_theta);
        write_vec(fields.eta_plasma);
        write_vec(fields.eta_vacuum);
        for (const auto& comp : fields.u1) write_vec(comp);
        for (const auto& comp : fields.v1) write_vec(comp);
        write_vec(fields.interface_x2);
    }

    // jump-residual report across the interface
    {
        auto res = jump_residuals(g, snap.coeffs, root, rc.physical);
        plasma_eigenvector ev = build_eigenvector(root, rc.physical);
        auto evres = detail::eigensystem_residual(ev, root.lambda, rc.physical);
        double evmax = 0.0;
        for (const cplx& v : evres) evmax = std::max(evmax, std::abs(v));
        ordered_json jr;
        jr["schema"] = "surfwave-jumps/1";
        jr["config_hash"] = hex64(hash);
        jr["tau"] = snap.tau;
        jr["jump_residuals"] = {{"kinematic_plasma", res[0]},
                                {"magnetic_plasma", res[1]},
                                {"magnetic_vacuum", res[2]},
                                {"total_pressure", res[3]},
                                {"electric_vacuum", res[4]}};
        double worst = *std::max_element(res.begin(), res.end());
        jr["max_jump_residual"] = worst;
        jr["eigenvector_residual"] = evmax;
        jr["pass"] = worst <= 1e-10 && evmax <= 1e-12;
        write_text_file(out / "jumps.json", jr.dump(2) + "\n");
        std::cout << "max jump residual " << fmt_double(worst) << ", eigenvector residual "
                  << fmt_double(evmax) << "\n";
    }
    return 0;
}

int cmd_analyze(const run_config& rc, std::vector<std::string> snapshot_paths, const std::string& out_path) {
    if (snapshot_paths.empty()) throw config_error("analyze: no snapshot files given");
    std::vector<snapshot_payload> snaps;
    snaps.reserve(snapshot_paths.size());
    for (const auto& p : snapshot_paths) snaps.push_back(read_snapshot(p));
    for (const auto& s : snaps)
        if (s.n_modes != snaps.front().n_modes || s.length != snaps.front().length)
            throw mismatch_error("analyze: snapshots disagree on the grid");
    std::sort(snaps.begin(), snaps.end(),
              [](const snapshot_payload& a, const snapshot_payload& b) { return a.tau < b.tau; });

    const spectral_grid g(snaps.front().n_modes, snaps.front().length);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw error("cannot open output file: " + out_path);
        os = &file;
    }
    ordered_json head;
    head["schema"] = diagnostics_schema;
    head["config_hash"] = hex64(snaps.front().config_hash);
    head["artifact_version"] = artifact_version;
    head["n_modes"] = g.n_modes;
    head["length"] = g.length;
    *os << head.dump() << "\n";

    blowup_accumulator acc;
    double prev_tau = 0.0;
    bool first = true;
    for (const auto& s : snaps) {
        std::vector<cplx> coeffs = s.coeffs;
        enforce_symmetry(g, coeffs);
        const auto psi = phi_to_psi(g, coeffs);
        step_diagnostics d;
        d.tau = s.tau;
        d.psi_l2 = homogeneous_norm(g, psi, 0.0);
        d.sup_phi_x = sup_gradient(g, coeffs);
        for (double sv : rc.norms.s_values) d.hs_norms.emplace_back(sv, homogeneous_norm(g, psi, sv));
        const double integrand = blowup_integrand(g, psi, rc.norms.s_prime);
        if (first) {
            acc.update(integrand, 0.0);
            first = false;
        } else {
            acc.update(integrand, s.tau - prev_tau);
        }
        prev_tau = s.tau;
        d.blowup_integral = acc.value;
        *os << diagnostics_line(d) << "\n";
    }
    return 0;
}

int cmd_bench(const run_config& rc) {
    bench_report rep = run_bench(rc.bench);
    std::cout << rep.tsv();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface-wave interface simulator"};
    app.set_version_flag("--version", std::string(artifact_version));
    app.require_subcommand(1);
    cli_options opt;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", opt.config_path, "configuration file (key = value)");
        if (config_required) c->required();
        return sub;
    };
    auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--formulation", opt.formulation_override,
                        "spectral-convolution | spatial-hilbert | spatial-commutator | noncanonical");
        sub->add_option("--n-modes", opt.n_modes_override, "number of Fourier modes (power of two)");
        sub->add_option("--length", opt.length_override, "spatial period");
        sub->add_option("--t-end", opt.t_end_override, "rescaled end time");
        sub->add_option("--seed", opt.seed_override, "seed for randomized profiles");
        sub->add_option("--snapshot-every", opt.snapshot_every_override, "snapshot cadence in steps");
    };

    CLI::App* roots = add_common(app.add_subcommand("roots", "analyze the dispersion relation"), true);

    CLI::App* simulate =
        add_common(app.add_subcommand("simulate", "integrate the amplitude equation"), true);
    simulate->add_option("--out", opt.out_dir, "output directory")->required();
    add_run_flags(simulate);

    CLI::App* verify =
        add_common(app.add_subcommand("verify-kernels", "run the verification suites"), false);
    verify->alias("verify");
    verify->add_option("--seed", opt.seed_override, "seed for randomized checks");
    verify
        ->add_flag("--inject-flip-sym-sign", opt.mutate_flip,
                   "fault injection: flip the symmetrized-kernel sign (expected to fail)")
        ->group("");

    CLI::App* fields = add_common(app.add_subcommand("fields", "reconstruct first-order fields"), true);
    fields->add_option("--snapshot", opt.snapshot_path, "snapshot file (.swsp)")->required();
    fields->add_option("--out", opt.out_dir, "output directory")->required();

    CLI::App* analyze =
        add_common(app.add_subcommand("analyze", "recompute diagnostics from snapshots"), false);
    analyze->add_option("snapshots", opt.analyze_snapshots, "snapshot files (.swsp)")->required();
    analyze->add_option("--out", opt.out_dir, "output NDJSON file (default: stdout)");

    CLI::App* bench = add_common(app.add_subcommand("bench", "time the right-hand-side paths"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (roots->parsed()) {
            run_config rc = load_or_default(roots, opt);
            return cmd_roots(rc);
        }
        if (simulate->parsed()) {
            run_config rc = load_or_default(simulate, opt);
            apply_overrides(simulate, opt, rc);
            return cmd_simulate(rc, opt.out_dir);
        }
        if (verify->parsed()) {
            run_config rc = load_or_default(verify, opt);
            if (verify->count("--seed")) rc.seed = opt.seed_override;
            return cmd_verify(rc, opt.mutate_flip);
        }
        if (fields->parsed()) {
            run_config rc = load_or_default(fields, opt);
            return cmd_fields(rc, opt.snapshot_path, opt.out_dir);
        }
        if (analyze->parsed()) {
            run_config rc = load_or_default(analyze, opt);
            return cmd_analyze(rc, opt.analyze_snapshots, opt.out_dir);
        }
        if (bench->parsed()) {
            run_config rc = load_or_default(bench, opt);
            return cmd_bench(rc);
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 3;
    } catch (const mismatch_error& e) {
        std::cerr << "mismatch error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

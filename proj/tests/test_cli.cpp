// End-to-end checks of the command-line interface: artifacts, exit codes,
// determinism, and the fault-injection path of the verification suites.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include <json.hpp>

#include "surfwave/manifest.hpp"

using namespace surfwave;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct cli_result {
    int exit_code = -1;
    std::string output;
};

fs::path work_dir() {
    fs::path dir = fs::temp_directory_path() / "surfwave_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

cli_result run_cli(const std::string& args) {
    static int counter = 0;
    fs::path out = work_dir() / ("cli_output_" + std::to_string(counter++) + ".txt");
    std::string cmd = std::string(SURFWAVE_BIN) + " " + args + " > " + out.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    cli_result r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.output = read_text(out);
    return r;
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << "schema = surfwave-config/1\n" << body;
    return p;
}

const std::string sim_body = "physical.root_index = 0\n"
                             "grid.n_modes = 64\n"
                             "solver.t_end = 0.2\n"
                             "profile.kind = cosine\n"
                             "profile.amplitude = 0.1\n"
                             "profile.mode = 1\n"
                             "output.diag_every = 10\n";

} // namespace

TEST_CASE("help and version exit cleanly") {
    cli_result help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("simulate") != std::string::npos);
    CHECK(help.output.find("roots") != std::string::npos);

    cli_result version = run_cli("--version");
    CHECK(version.exit_code == 0);
    CHECK(version.output.find(artifact_version) != std::string::npos);
}

TEST_CASE("argument errors exit with the configuration code") {
    CHECK(run_cli("").exit_code == 2);                    // missing subcommand
    CHECK(run_cli("simulate").exit_code == 2);            // missing required options
    CHECK(run_cli("roots --no-such-flag").exit_code == 2);
    CHECK(run_cli("roots --config /nonexistent.conf").exit_code == 2);
}

TEST_CASE("roots subcommand prints the regime and root table") {
    fs::path cfg = write_config("roots_two.conf", "");
    cli_result r = run_cli("roots --config " + cfg.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("regime\tTwoRoots") != std::string::npos);
    CHECK(r.output.find("index\tlambda\tsigma\td\tregime\trescale\tusable") != std::string::npos);
    CHECK(r.output.find("0.93956490916664") != std::string::npos);

    fs::path none = write_config("roots_none.conf", "physical.b1 = 5\n");
    cli_result rn = run_cli("roots --config " + none.string());
    CHECK(rn.exit_code == 0);
    CHECK(rn.output.find("regime\tNoRoot") != std::string::npos);
}

TEST_CASE("simulate produces the documented artifact set") {
    fs::path cfg = write_config("sim.conf", sim_body);
    fs::path out = work_dir() / "sim_run";
    fs::remove_all(out);
    cli_result r = run_cli("simulate --config " + cfg.string() + " --out " + out.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("stop reason: t_end") != std::string::npos);

    REQUIRE(fs::exists(out / "manifest.json"));
    REQUIRE(fs::exists(out / "diagnostics.ndjson"));
    REQUIRE(fs::exists(out / "stop.json"));
    REQUIRE(fs::exists(out / "snapshot_000000.swsp"));
    REQUIRE(fs::exists(out / "snapshot_000000.csv"));
    REQUIRE(fs::exists(out / "snapshot_final.swsp"));
    REQUIRE(fs::exists(out / "snapshot_final.csv"));

    json manifest = json::parse(read_text(out / "manifest.json"));
    CHECK(manifest["schema"] == "surfwave-manifest/1");
    CHECK(manifest["regime"] == "TwoRoots");
    CHECK(manifest["chosen_root_index"] == 0);
    CHECK(manifest["grid"]["n_modes"] == 64);

    json stop = json::parse(read_text(out / "stop.json"));
    CHECK(stop["schema"] == "surfwave-stop/1");
    CHECK(stop["reason"] == "t_end");
    CHECK(stop["config_hash"] == manifest["config_hash"]);
    CHECK(std::abs(stop["tau"].get<double>() - 0.2) <= 1e-12);

    // Snapshot hashes tie the artifacts to the manifest.
    snapshot_payload sp = read_snapshot((out / "snapshot_final.swsp").string());
    CHECK(hex64(sp.config_hash) == manifest["config_hash"].get<std::string>());
    CHECK(sp.n_modes == 64);
    CHECK(std::abs(sp.tau - 0.2) <= 1e-12);

    // The diagnostics stream is a header plus one json object per cadence.
    std::istringstream diag(read_text(out / "diagnostics.ndjson"));
    std::string line;
    REQUIRE(std::getline(diag, line));
    json header = json::parse(line);
    CHECK(header["schema"] == diagnostics_schema);
    std::size_t rows = 0;
    double last_tau = -1.0;
    while (std::getline(diag, line)) {
        if (line.empty()) continue;
        json row = json::parse(line);
        CHECK(row["tau"].get<double>() >= last_tau);
        last_tau = row["tau"].get<double>();
        ++rows;
    }
    CHECK(rows >= 2);
}

TEST_CASE("simulate with an identical config and seed is bit-reproducible") {
    fs::path cfg = write_config("sim_repro.conf", sim_body);
    fs::path out1 = work_dir() / "repro_a";
    fs::path out2 = work_dir() / "repro_b";
    fs::remove_all(out1);
    fs::remove_all(out2);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out1.string()).exit_code == 0);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out2.string()).exit_code == 0);
    CHECK(read_text(out1 / "diagnostics.ndjson") == read_text(out2 / "diagnostics.ndjson"));
    CHECK(read_text(out1 / "snapshot_final.swsp") == read_text(out2 / "snapshot_final.swsp"));
    CHECK(read_text(out1 / "stop.json") == read_text(out2 / "stop.json"));
}

TEST_CASE("simulate maps domain errors onto distinct exit codes") {
    // No usable root: |B| exceeds |v| + 1/nu.  No explicit root index here —
    // asking for index 0 when the root set is empty is a config error instead.
    fs::path no_root = write_config("sim_noroot.conf",
                                    "physical.b1 = 5\n"
                                    "grid.n_modes = 64\n"
                                    "solver.t_end = 0.2\n");
    CHECK(run_cli("simulate --config " + no_root.string() + " --out " + (work_dir() / "nr").string())
              .exit_code == 3);

    // Ambiguous root: two usable roots and no explicit index.
    fs::path ambiguous = write_config("sim_ambiguous.conf",
                                      "grid.n_modes = 64\n"
                                      "solver.t_end = 0.1\n");
    CHECK(run_cli("simulate --config " + ambiguous.string() + " --out " + (work_dir() / "amb").string())
              .exit_code == 2);

    // Unknown key.
    fs::path unknown = write_config("sim_unknown.conf", "nonsense.key = 1\n");
    CHECK(run_cli("simulate --config " + unknown.string() + " --out " + (work_dir() / "unk").string())
              .exit_code == 2);
}

TEST_CASE("command-line overrides update the manifest hash") {
    fs::path cfg = write_config("sim_override.conf", sim_body);
    fs::path out1 = work_dir() / "ovr_a";
    fs::path out2 = work_dir() / "ovr_b";
    fs::remove_all(out1);
    fs::remove_all(out2);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + out1.string()).exit_code == 0);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --formulation spectral-convolution --out " +
                    out2.string())
                .exit_code == 0);
    json m1 = json::parse(read_text(out1 / "manifest.json"));
    json m2 = json::parse(read_text(out2 / "manifest.json"));
    CHECK(m1["config_hash"] != m2["config_hash"]);
    CHECK(m2["solver"]["formulation"] == "spectral-convolution");
}

TEST_CASE("fields reconstructs from a snapshot and checks provenance") {
    fs::path cfg = write_config("fields.conf", sim_body);
    fs::path run_out = work_dir() / "fields_run";
    fs::remove_all(run_out);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + run_out.string()).exit_code == 0);

    fs::path fld_out = work_dir() / "fields_out";
    fs::remove_all(fld_out);
    cli_result r = run_cli("fields --config " + cfg.string() + " --snapshot " +
                           (run_out / "snapshot_final.swsp").string() + " --out " + fld_out.string());
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(fld_out / "fields.csv"));
    REQUIRE(fs::exists(fld_out / "fields.bin"));
    REQUIRE(fs::exists(fld_out / "jumps.json"));

    json jumps = json::parse(read_text(fld_out / "jumps.json"));
    CHECK(jumps["schema"] == "surfwave-jumps/1");
    CHECK(jumps["pass"] == true);
    CHECK(jumps["max_jump_residual"].get<double>() <= 1e-10);
    CHECK(jumps["eigenvector_residual"].get<double>() <= 1e-12);

    std::istringstream csv(read_text(fld_out / "fields.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line.find("# config_hash=") == 0);
    std::getline(csv, line);
    CHECK(line == "field,theta,eta,value");

    // A config differing in an evolution-relevant field must be rejected.
    // (Append the override: for duplicate keys the last assignment wins.)
    fs::path other = write_config("fields_other.conf",
                                  sim_body + "profile.amplitude = 0.2\n");
    cli_result mismatch = run_cli("fields --config " + other.string() + " --snapshot " +
                                  (run_out / "snapshot_final.swsp").string() + " --out " +
                                  (work_dir() / "fields_bad").string());
    CHECK(mismatch.exit_code == 4);
}

TEST_CASE("analyze recomputes diagnostics from stored snapshots") {
    fs::path cfg = write_config("analyze.conf", sim_body);
    fs::path run_out = work_dir() / "analyze_run";
    fs::remove_all(run_out);
    REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " + run_out.string()).exit_code == 0);

    fs::path report = work_dir() / "analyze.ndjson";
    fs::remove(report);
    // Pass the snapshots out of order; rows come back sorted by tau.
    cli_result r = run_cli("analyze " + (run_out / "snapshot_final.swsp").string() + " " +
                           (run_out / "snapshot_000000.swsp").string() + " --out " + report.string());
    REQUIRE(r.exit_code == 0);

    std::istringstream in(read_text(report));
    std::vector<json> rows;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json row = json::parse(line);
        if (row.contains("tau"))
            rows.push_back(std::move(row));
        else {
            // Leading header row carries provenance, not per-snapshot data.
            CHECK(row["schema"] == "surfwave-diagnostics/1");
            saw_header = true;
        }
    }
    CHECK(saw_header);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["tau"].get<double>() == 0.0);
    CHECK(std::abs(rows[1]["tau"].get<double>() - 0.2) <= 1e-12);
    // The conserved norm agrees across the run to well below the drift bound.
    CHECK(std::abs(rows[0]["psi_l2"].get<double>() - rows[1]["psi_l2"].get<double>()) <=
          1e-8 * rows[0]["psi_l2"].get<double>());

    // Mixing grids is a mismatch error.
    fs::path other_cfg = write_config("analyze_other.conf",
                                      "physical.root_index = 0\n"
                                      "grid.n_modes = 32\n"
                                      "solver.t_end = 0.05\n"
                                      "output.diag_every = 10\n");
    fs::path other_run = work_dir() / "analyze_other_run";
    fs::remove_all(other_run);
    REQUIRE(run_cli("simulate --config " + other_cfg.string() + " --out " + other_run.string())
                .exit_code == 0);
    cli_result bad = run_cli("analyze " + (run_out / "snapshot_final.swsp").string() + " " +
                             (other_run / "snapshot_final.swsp").string());
    CHECK(bad.exit_code == 4);
}

TEST_CASE("verification suites pass at a reduced sample count") {
    fs::path cfg = write_config("verify.conf", "verify.samples = 2000\n");
    cli_result r = run_cli("verify-kernels --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("ALL PASS") != std::string::npos);
    CHECK(r.output.find("FAIL\n") == std::string::npos);
    CHECK(r.output.find("lambda-symmetry") != std::string::npos);
    CHECK(r.output.find("cyclic-cancellation") != std::string::npos);

    // The alias spelling works too.
    CHECK(run_cli("verify --config " + cfg.string()).exit_code == 0);
}

TEST_CASE("fault injection makes exactly the symmetrization rows fail") {
    fs::path cfg = write_config("verify_mut.conf", "verify.samples = 2000\n");
    cli_result r = run_cli("verify-kernels --inject-flip-sym-sign --config " + cfg.string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAILURES PRESENT") != std::string::npos);

    std::istringstream in(r.output);
    std::string line;
    std::vector<std::string> failed;
    while (std::getline(in, line)) {
        if (line.find("\tFAIL") == std::string::npos) continue;
        failed.push_back(line.substr(0, line.find('\t')));
    }
    std::vector<std::string> expected{"symmetrization-pos", "symmetrization-neg"};
    CHECK(failed == expected);
}

TEST_CASE("bench reports one row per size and path plus fitted exponents") {
    fs::path cfg = write_config("bench.conf", "bench.sizes = 64, 128\nbench.reps = 2\n");
    cli_result r = run_cli("bench --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("n_modes\tpath\tcold_ns\twarm_ns\tstep_ns") != std::string::npos);
    CHECK(r.output.find("rhs_spectral_convolution") != std::string::npos);
    CHECK(r.output.find("rhs_spatial") != std::string::npos);
    CHECK(r.output.find("exponent") != std::string::npos);
    std::size_t rows = 0;
    std::istringstream in(r.output);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("64\t", 0) == 0 || line.rfind("128\t", 0) == 0) ++rows;
    CHECK(rows >= 4); // two sizes x at least two timed paths
}

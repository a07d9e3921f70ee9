#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsnse/cli.hpp"
#include "fsnse/config.hpp"
#include "fsnse/snapshot.hpp"

using namespace fsnse;
namespace fs = std::filesystem;

namespace {

const char* SAMPLE_CONFIG = R"(# sample run
[physics]
alpha = 1.5
nu = 1.0

[grid]
n = 6
dt = 1e-3
T = 0.02

[noise]
kind = additive
gamma_Q = 2.5
seed = 42

[initial]
kind = taylor_green
amplitude = 1.0

[output]
record_stride = 5
formulation = velocity
)";

std::string write_temp(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "fsnse_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parses, renders, and round-trips identically") {
    const RunConfig cfg = parse_config_text(SAMPLE_CONFIG);
    CHECK(cfg.sim.diss.alpha == 1.5);
    CHECK(cfg.sim.level == 6);
    CHECK(cfg.sim.noise.enabled);
    CHECK(cfg.sim.noise.seed == 42);
    CHECK(cfg.sim.initial.kind == InitialKind::TaylorGreen);

    const std::string echo = render_config(cfg);
    const RunConfig again = parse_config_text(echo);
    CHECK(render_config(again) == echo);
    CHECK(again.sim.dt == cfg.sim.dt);
    CHECK(again.sim.noise.gamma_q == cfg.sim.noise.gamma_q);
}

TEST_CASE("config errors name the offending key") {
    CHECK_THROWS_WITH_AS(parse_config_text("[physics]\nalpha = 2.5\n"),
                         doctest::Contains("(0, 2]"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nwibble = 3\n"),
                         doctest::Contains("grid.wibble"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn = soon\n"), doctest::Contains("grid.n"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config_text("alpha = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[nowhere]\nx = 1\n"), ConfigError);
}

TEST_CASE("cmd_run writes a monotone CSV and a manifest that re-parses") {
    const std::string cfg_path = write_temp("run.cfg", SAMPLE_CONFIG);
    const fs::path out_dir = fs::temp_directory_path() / "fsnse_test" / "out1";
    fs::remove_all(out_dir);

    cli::RunOptions opts;
    opts.config_path = cfg_path;
    opts.out_dir = out_dir.string();
    std::ostringstream out, err;
    const int rc = cli::cmd_run(opts, out, err);
    CHECK(rc == 0);

    const std::string csv = slurp((out_dir / "trajectory.csv").string());
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == csv_header());
    double prev_t = -1.0;
    int rows = 0;
    while (std::getline(lines, line)) {
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t > prev_t);
        prev_t = t;
        ++rows;
    }
    CHECK(rows == 5); // 20 steps, stride 5, plus the t=0 record

    // manifest echo re-parses to the same effective config
    const std::string manifest = slurp((out_dir / "manifest.txt").string());
    const std::size_t marker = manifest.find("[physics]");
    REQUIRE(marker != std::string::npos);
    const RunConfig echoed = parse_config_text(manifest.substr(marker));
    CHECK(echoed.sim.level == 6);
    CHECK(echoed.sim.noise.seed == 42);
}

TEST_CASE("cmd_run exit codes: config errors and validation failures give 1") {
    std::ostringstream out, err;
    cli::RunOptions opts;
    opts.config_path = write_temp("bad_alpha.cfg", "[physics]\nalpha = 2.5\n");
    CHECK(cli::cmd_run(opts, out, err) == 1);
    CHECK(err.str().find("alpha") != std::string::npos);

    opts.config_path = write_temp("missing.cfg.nothere", "");
    fs::remove(opts.config_path);
    CHECK(cli::cmd_run(opts, out, err) == 1);
}

TEST_CASE("cmd_run reruns byte-identically with the same seed") {
    const std::string cfg_path = write_temp("repro.cfg", SAMPLE_CONFIG);
    const fs::path d1 = fs::temp_directory_path() / "fsnse_test" / "r1";
    const fs::path d2 = fs::temp_directory_path() / "fsnse_test" / "r2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    std::ostringstream out, err;
    cli::RunOptions o1, o2;
    o1.config_path = o2.config_path = cfg_path;
    o1.out_dir = d1.string();
    o2.out_dir = d2.string();
    REQUIRE(cli::cmd_run(o1, out, err) == 0);
    REQUIRE(cli::cmd_run(o2, out, err) == 0);
    CHECK(slurp((d1 / "trajectory.csv").string()) == slurp((d2 / "trajectory.csv").string()));
}

TEST_CASE("cmd_converge: empty study is a config error, valid study writes tables") {
    std::ostringstream out, err;
    cli::RunOptions opts;
    opts.config_path = write_temp("nostudy.cfg", SAMPLE_CONFIG);
    opts.out_dir = (fs::temp_directory_path() / "fsnse_test" / "conv0").string();
    CHECK(cli::cmd_converge(opts, out, err) == 1);
    CHECK(err.str().find("study") != std::string::npos);

    const std::string study_cfg = std::string(SAMPLE_CONFIG) +
                                  "\n[study]\nlevels = 3,6\ndts = 2e-3,1e-3\npaths = 0\n";
    opts.config_path = write_temp("study.cfg", study_cfg);
    const fs::path conv_dir = fs::temp_directory_path() / "fsnse_test" / "conv1";
    fs::remove_all(conv_dir);
    opts.out_dir = conv_dir.string();
    std::ostringstream out2;
    CHECK(cli::cmd_converge(opts, out2, err) == 0);
    CHECK(out2.str().find("spatial self-convergence") != std::string::npos);
    CHECK(fs::exists(conv_dir / "convergence.txt"));
}

TEST_CASE("cmd_info summarizes a config and validates it") {
    std::ostringstream out, err;
    CHECK(cli::cmd_info("", out, err) == 0);
    CHECK(out.str().find("fsnse") != std::string::npos);

    const std::string cfg_path = write_temp("info.cfg", SAMPLE_CONFIG);
    std::ostringstream out2;
    CHECK(cli::cmd_info(cfg_path, out2, err) == 0);
    CHECK(out2.str().find("subcritical") != std::string::npos);
    CHECK(cli::cmd_info(write_temp("bad.cfg", "[physics]\nnu = -1\n"), out2, err) == 1);
}

TEST_CASE("snapshots round-trip through the binary format") {
    const SpectralField f = gaussian_random_field(5, 2, 2.0, 88, 0, true);
    const fs::path p = fs::temp_directory_path() / "fsnse_test" / "field.fsns";
    fs::create_directories(p.parent_path());
    save_snapshot(f, p.string());
    const SpectralField g = load_snapshot(p.string());
    REQUIRE(g.level() == f.level());
    REQUIRE(g.components() == f.components());
    for (std::size_t i = 0; i < f.mode_count(); ++i)
        for (int c = 0; c < 2; ++c) CHECK(f.at(i, c) == g.at(i, c));

    // header checks are strict
    std::ofstream bad(p.string(), std::ios::binary);
    bad << "XXXX";
    bad.close();
    CHECK_THROWS_AS(load_snapshot(p.string()), std::runtime_error);
}

TEST_CASE("cmd_run returns 2 on numerical overflow") {
    const std::string cfg = R"([physics]
alpha = 0.5
nu = 1e-8
[grid]
n = 4
dt = 1e-3
T = 0.01
[initial]
kind = random
amplitude = 1e200
seed = 1
[noise]
kind = none
)";
    std::ostringstream out, err;
    cli::RunOptions opts;
    opts.config_path = write_temp("overflow.cfg", cfg);
    opts.out_dir = (fs::temp_directory_path() / "fsnse_test" / "ovf").string();
    CHECK(cli::cmd_run(opts, out, err) == 2);
    CHECK(err.str().find("overflow") != std::string::npos);
}

TEST_CASE("a modeled stopping event still exits 0 and lands in the manifest") {
    const std::string cfg = std::string(SAMPLE_CONFIG) + "threshold = 1e-9\n";
    std::ostringstream out, err;
    cli::RunOptions opts;
    opts.config_path = write_temp("stop.cfg", cfg);
    const fs::path dir = fs::temp_directory_path() / "fsnse_test" / "stop";
    fs::remove_all(dir);
    opts.out_dir = dir.string();
    CHECK(cli::cmd_run(opts, out, err) == 0);
    const std::string manifest = slurp((dir / "manifest.txt").string());
    CHECK(manifest.find("stopping_time") != std::string::npos);
}

TEST_CASE("per-record snapshots are written and load back") {
    std::ostringstream out, err;
    cli::RunOptions opts;
    opts.config_path = write_temp("snap.cfg", SAMPLE_CONFIG);
    const fs::path dir = fs::temp_directory_path() / "fsnse_test" / "snaps";
    fs::remove_all(dir);
    opts.out_dir = dir.string();
    opts.snapshots_every = 2;
    REQUIRE(cli::cmd_run(opts, out, err) == 0);
    int count = 0;
    for (const auto& entry : fs::directory_iterator(dir / "snapshots")) {
        const SpectralField f = load_snapshot(entry.path().string());
        CHECK(f.level() == 6);
        ++count;
    }
    CHECK(count >= 2);
}

TEST_CASE("an explicit covariance table drives the noise") {
    // one forced mode pair
    const std::string table = "1 0 0.5\n-1 0 0.5\n";
    const std::string table_path = write_temp("qtab.txt", table);
    const std::string cfg = std::string(SAMPLE_CONFIG) +
                            "\n[noise]\nkind = additive\nq_table = " + table_path + "\n";
    const RunConfig rc = parse_config_text(cfg);
    CHECK(rc.sim.noise.q_table_path == table_path);
    const CovarianceSpectrum spec = rc.sim.noise.spectrum(rc.sim.level);
    CHECK(spec.q_at({1, 0}) == doctest::Approx(0.5));
    CHECK(spec.q_at({2, 0}) == 0.0);
    // runs end to end
    std::ostringstream out, err;
    cli::RunOptions opts;
    opts.config_path = write_temp("qtab.cfg", cfg);
    opts.out_dir = (fs::temp_directory_path() / "fsnse_test" / "qtab").string();
    CHECK(cli::cmd_run(opts, out, err) == 0);
}

TEST_CASE("vorticity and coupled formulations run through the CLI") {
    for (const char* form : {"vorticity", "both"}) {
        const std::string cfg = std::string(SAMPLE_CONFIG) + "formulation = " +
                                form + "\n";
        std::ostringstream out, err;
        cli::RunOptions opts;
        opts.config_path = write_temp(std::string("form_") + form + ".cfg", cfg);
        opts.out_dir =
            (fs::temp_directory_path() / "fsnse_test" / (std::string("form_") + form)).string();
        CHECK(cli::cmd_run(opts, out, err) == 0);
    }
}

TEST_CASE("verify suites pass through the spawned binary") {
    const char* bin = std::getenv("FSNSE_BIN");
    if (!bin) {
        MESSAGE("FSNSE_BIN not set; skipping spawn test");
        return;
    }
    const std::string cmd = std::string(bin) + " verify coupling --seed 11 > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    const std::string bad = std::string(bin) + " verify nosuchsuite > /dev/null 2>&1";
    CHECK(std::system(bad.c_str()) != 0);
}

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "euler2d/scenario.hpp"

using namespace euler2d;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
}

} // namespace

TEST_CASE("scenario parsing: defaults survive an empty file, keys override") {
    fs::create_directories("cli_tmp");
    write("cli_tmp/empty.cfg", "# nothing but comments\n");
    Scenario sc = parse_scenario("cli_tmp/empty.cfg");
    CHECK(sc.generator == "gaussian-blob");
    CHECK(sc.n == 128);

    write("cli_tmp/full.cfg",
          "name demo\n"
          "generator shear\n"
          "n 64\n"
          "half_width 3.141592653589793\n"
          "t_final 0.5\n"
          "recovery renormalized\n"
          "cutoff exp\n"
          "cutoff_scale 1.0\n"
          "schedule 1.0,1.5\n"
          "uinf_rate 1 0\n"
          "periodic true\n"
          "verifiers serfati,moc\n"
          "seed 7\n");
    sc = parse_scenario("cli_tmp/full.cfg");
    CHECK(sc.name == "demo");
    CHECK(sc.generator == "shear");
    CHECK(sc.n == 64);
    CHECK(sc.cutoff_profile == "exp");
    CHECK(sc.schedule == std::vector<double>{1.0, 1.5});
    CHECK(sc.uinf_rate.x == 1.0);
    CHECK(sc.periodic);
    CHECK(sc.verifiers == std::vector<std::string>{"serfati", "moc"});

    write("cli_tmp/bad.cfg", "no_such_key 3\n");
    CHECK_THROWS_AS(parse_scenario("cli_tmp/bad.cfg"), InvalidArgument);
    CHECK_THROWS_AS(parse_scenario("cli_tmp/missing.cfg"), InvalidArgument);
}

TEST_CASE("make_initial_data: generators and the custom-file path") {
    Grid g(64, 8.0);
    Scenario sc;
    for (const char* gen : {"shear", "patch", "disk", "gaussian-blob", "dipole"}) {
        sc.generator = gen;
        auto d = make_initial_data(sc, g);
        CHECK(d.u.grid == g);
    }
    sc.generator = "custom-file";
    sc.custom_u = "cli_tmp/u.fld";
    sc.custom_omega = "cli_tmp/w.fld";
    CHECK_THROWS_AS(make_initial_data(sc, g), InvalidArgument); // files do not exist yet
    auto blob = initial_data::gaussian_blob(g);
    io::save_binary(blob.u, "cli_tmp/u.fld");
    io::save_binary(blob.omega, "cli_tmp/w.fld");
    auto d = make_initial_data(sc, g);
    CHECK(sup_norm(d.u - blob.u) == 0.0);

    sc.generator = "not-a-generator";
    CHECK_THROWS_AS(make_initial_data(sc, g), InvalidArgument);
}

TEST_CASE("run_scenario: blob scenario passes its verifiers and writes reports") {
    Scenario sc;
    sc.name = "blob-test";
    sc.generator = "gaussian-blob";
    sc.n = 64;
    sc.half_width = 8.0;
    sc.t_final = 0.2;
    sc.dt = 0.2 / 6;
    sc.recovery = "classical";
    sc.sigma = 0.7;
    sc.amplitude = 0.5;
    sc.verifiers = {"serfati", "renorm", "pressure", "moc"};
    auto outcome = run_scenario(sc, "cli_tmp/out");
    CHECK(outcome.pass);
    for (const char* f : {"config_echo.txt", "report_serfati.txt", "report_renorm.txt",
                          "report_pressure.txt", "report_moc.txt", "residual_vs_time.csv",
                          "shell_max.csv", "radial_profile.csv"})
        CHECK(fs::exists(fs::path(outcome.out_dir) / f));
    CHECK(fs::exists(fs::path(outcome.out_dir) / "trajectory" / "config.txt"));

    // reproducibility contract: the reports name cutoff profile and grid
    auto rep = slurp(fs::path(outcome.out_dir) / "report_serfati.txt");
    CHECK(rep.find("cutoff quintic") != std::string::npos);
    CHECK(rep.find("grid n 64") != std::string::npos);
}

TEST_CASE("run_scenario is deterministic: identical config gives identical bytes") {
    Scenario sc;
    sc.name = "det";
    sc.generator = "gaussian-blob";
    sc.n = 64;
    sc.half_width = 8.0;
    sc.t_final = 0.15;
    sc.dt = 0.05;
    sc.recovery = "classical";
    sc.verifiers = {"serfati", "pressure", "moc"};
    auto o1 = run_scenario(sc, "cli_tmp/det1");
    auto o2 = run_scenario(sc, "cli_tmp/det2");
    REQUIRE(o1.pass);
    REQUIRE(o2.pass);
    for (const char* f : {"report_serfati.txt", "report_pressure.txt", "report_moc.txt",
                          "residual_vs_time.csv", "radial_profile.csv"}) {
        CHECK(slurp(fs::path(o1.out_dir) / f) == slurp(fs::path(o2.out_dir) / f));
    }
}

TEST_CASE("trajectory save/load round trip through the scenario layout") {
    Scenario sc;
    sc.name = "roundtrip";
    sc.generator = "gaussian-blob";
    sc.n = 64;
    sc.half_width = 8.0;
    sc.t_final = 0.1;
    sc.dt = 0.05;
    sc.recovery = "classical";
    sc.verifiers = {};
    auto outcome = run_scenario(sc, "cli_tmp/rt");
    Trajectory traj = Trajectory::load((fs::path(outcome.out_dir) / "trajectory").string());
    CHECK(traj.snaps.size() == 3);
    CHECK(traj.grid.n == 64);
    CHECK(traj.cutoff.profile_name == "quintic");
}

TEST_CASE("verify_all: empty grid list is a usage error; ladder passes") {
    CHECK_THROWS_AS(verify_all({}), InvalidArgument);
    CHECK_THROWS_AS(verify_all({7}), InvalidArgument);
    auto table = verify_all({64, 128});
    CHECK(table.rows.size() == 6);
    for (const auto& r : table.rows) {
        INFO(r.name, " observed ", r.observed_order, " target ", r.target_order);
        CHECK(r.pass);
    }
    auto txt = table.to_text();
    CHECK(txt.find("almost_bs_identity") != std::string::npos);
}

#ifdef CLI_BIN
TEST_CASE("cli binary: exit codes for run / config error") {
    std::string bin = CLI_BIN;
    write("cli_tmp/smoke.cfg",
          "name smoke\ngenerator gaussian-blob\nn 64\nhalf_width 8\nt_final 0.1\ndt 0.05\n"
          "recovery classical\nverifiers serfati\n");
    std::string cmd = bin + " run cli_tmp/smoke.cfg --out cli_tmp/smoke_out > cli_tmp/run.log 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    cmd = bin + " run cli_tmp/does_not_exist.cfg > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
    cmd = bin + " moc > cli_tmp/moc.log 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    cmd = bin + " pressure cli_tmp/smoke_out/smoke/trajectory > cli_tmp/press.log 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    std::filesystem::remove_all("cli_tmp");
}
#endif

TEST_CASE("shipped scenario files run end to end and pass") {
    for (const char* f : {"shear-steady.cfg", "rigid-translation.cfg",
                          "patch-classical-vs-serfati.cfg"}) {
        fs::path cfg = fs::path(SCENARIO_DIR) / f;
        REQUIRE(fs::exists(cfg));
        Scenario sc = parse_scenario(cfg.string());
        auto outcome = run_scenario(sc, "cli_tmp_scen");
        for (const auto& v : outcome.verifiers) {
            INFO(sc.name, " verifier ", v.name, ": ", v.detail);
            CHECK(v.pass);
        }
        CHECK(outcome.pass);
    }
    fs::remove_all("cli_tmp_scen");
}

// Experiment runner for the bounded-solution toolkit: named scenarios,
// batch verification suites, and plot-data emission. Exit codes: 0 all
// checks pass, 1 a verifier failed, 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "euler2d/scenario.hpp"

namespace {

std::string output_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("EULER2D_OUT")) return env;
    return "out";
}

int cmd_run(const std::string& cfg_path, const std::string& out_flag) {
    euler2d::Scenario sc = euler2d::parse_scenario(cfg_path);
    auto outcome = euler2d::run_scenario(sc, output_root(out_flag));
    for (const auto& v : outcome.verifiers)
        std::printf("[%s] %-10s %s\n", v.pass ? "pass" : "FAIL", v.name.c_str(),
                    v.detail.c_str());
    std::printf("reports: %s\n", outcome.out_dir.c_str());
    if (!outcome.pass) {
        std::fprintf(stderr, "first failing verifier: %s\n", outcome.first_failure.c_str());
        return 1;
    }
    return 0;
}

int cmd_verify(const std::vector<int>& grids) {
    auto table = euler2d::verify_all(grids);
    std::fputs(table.to_text().c_str(), stdout);
    return table.all_pass() ? 0 : 1;
}

int cmd_bounds() {
    euler2d::Grid g(256, 8.0);
    auto rep = euler2d::bounds::verify_kernel_bounds(g, euler2d::RadialCutoff::quintic(1.0));
    std::fputs(rep.to_text().c_str(), stdout);
    return rep.all_pass() ? 0 : 1;
}

int cmd_moc() {
    using namespace euler2d;
    bool ok = true;
    auto line = [&](const char* name, double got, double want, double tol) {
        bool pass = std::abs(got - want) <= tol * std::abs(want);
        ok = ok && pass;
        std::printf("[%s] %-28s got %.12g want %.12g\n", pass ? "pass" : "FAIL", name, got, want);
    };
    Moc mu = Moc::log_lipschitz(1.0);
    const double e_inv = std::exp(-1.0);
    line("dini_closed_form(0.1)", dini_integral(mu.as_generic(), 0.1),
         0.1 - 0.1 * std::log(0.1), 1e-10);
    line("dini_S(1/e)", dini_integral(mu, e_inv), 2.0 * e_inv, 1e-12);
    // ratio constancy of the Riesz-transform modulus shapes
    double q1 = riesz_moc(mu, 1.0) / 1.0;
    double q2 = riesz_moc(mu, std::exp(1.0)) / 2.0;
    double q3 = riesz_moc(mu, std::exp(2.0)) / 3.0;
    line("nu_large_ratio(e)", q2, q1, 0.01);
    line("nu_large_ratio(e^2)", q3, q1, 0.01);
    auto small_shape = [](double r) { double l = std::log(r); return r * (l * l - l); };
    double s2 = riesz_moc(mu, std::exp(-2.0)) / small_shape(std::exp(-2.0));
    double s3 = riesz_moc(mu, std::exp(-3.0)) / small_shape(std::exp(-3.0));
    double s4 = riesz_moc(mu, std::exp(-4.0)) / small_shape(std::exp(-4.0));
    line("nu_small_ratio(e^-3)", s3, s2, 0.01);
    line("nu_small_ratio(e^-4)", s4, s2, 0.01);
    return ok ? 0 : 1;
}

int cmd_pressure(const std::string& traj_dir) {
    using namespace euler2d;
    Trajectory traj = Trajectory::load(traj_dir);
    const auto& last = traj.back();
    Vec2 uprime = traj.uinf.derivative(last.t);
    auto riesz = pressure_riesz(last.u, uprime);
    VectorField split = grad_pressure(last.u, uprime, traj.cutoff,
                                      std::min(2.0, traj.grid.half_width / 4.0));
    VectorField sg = gradient(riesz.p);
    double dist = sup_norm_on(sg - split, probe_nodes(traj.grid, traj.grid.half_width / 4.0));
    double h2 = traj.grid.spacing * traj.grid.spacing;
    std::fputs(riesz.fit.to_text().c_str(), stdout);
    std::printf("route_agreement %.17g (tol %.17g)\n", dist, 10 * h2);
    std::printf("window_radius %.17g\n", riesz.window_radius);
    return dist <= 10 * h2 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounded-vorticity 2D Euler toolkit"};
    app.require_subcommand(1);

    std::string cfg_path, out_flag, traj_dir;
    std::vector<int> grids;

    auto* run_cmd = app.add_subcommand("run", "run a scenario config and its verifiers");
    run_cmd->add_option("config", cfg_path, "scenario file")->required();
    run_cmd->add_option("--out", out_flag, "output root (default $EULER2D_OUT or ./out)");

    auto* verify_cmd = app.add_subcommand("verify", "convergence-order suite over a grid ladder");
    verify_cmd->add_option("--grids", grids, "grid sizes, e.g. 64,128,256")
        ->required()
        ->delimiter(',');

    app.add_subcommand("bounds", "kernel-bound scaling checks");
    app.add_subcommand("moc", "modulus-of-continuity functional-form checks");

    auto* pressure_cmd = app.add_subcommand("pressure", "pressure routes on a saved trajectory");
    pressure_cmd->add_option("traj", traj_dir, "trajectory directory")->required();

    try {
        app.parse(argc, argv);
        if (run_cmd->parsed()) return cmd_run(cfg_path, out_flag);
        if (verify_cmd->parsed()) return cmd_verify(grids);
        if (app.get_subcommand("bounds")->parsed()) return cmd_bounds();
        if (app.get_subcommand("moc")->parsed()) return cmd_moc();
        if (pressure_cmd->parsed()) return cmd_pressure(traj_dir);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const euler2d::InvalidArgument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

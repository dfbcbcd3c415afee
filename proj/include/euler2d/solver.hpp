#ifndef EULER2D_SOLVER_HPP
#define EULER2D_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "euler2d/biot_savart.hpp"
#include "euler2d/common.hpp"
#include "euler2d/field.hpp"
#include "euler2d/serfati.hpp"
#include "euler2d/trajectory.hpp"
#include "euler2d/uinf.hpp"

namespace euler2d {

/// How the velocity is recovered from the transported vorticity each step.
enum class RecoveryMode {
    Classical,        ///< u = K * omega + U_inf (compact vorticity)
    Renormalized,     ///< u = u0 + U_inf + lim (a_R K) * (omega - omega0)
    SerfatiFixedPoint ///< Picard iteration on the Serfati identity
};

struct SolverConfig {
    double dt = 0;      ///< 0: set from the CFL condition
    double t_final = 1.0;
    double cfl = 0.8;
    RecoveryMode mode = RecoveryMode::Renormalized;
    RadialCutoff cutoff = RadialCutoff::quintic(1.0);
    std::vector<double> schedule = {1.0, 2.0}; ///< scales for renormalized recovery
    UInfinityPath uinf;
    int snapshot_every = 1;
    double fp_tol = 1e-8;
    int fp_max_iters = 50;
    Interp interp = Interp::Bicubic;
    bool clamp_transport = true; ///< clamp interpolated omega to the initial range
    bool periodic = false;       ///< wrap interpolation (data known 2L-periodic)
    double support_radius = 0;   ///< classical mode: declared vorticity support
    double renorm_tol = 1e-7;
    double renorm_probe_half = 0; ///< probe box for the recovery's Cauchy test (0: L/4)
    ConvMode conv = ConvMode::Auto;
};

struct StepDiagnostics {
    double max_displacement = 0;
    int fp_iterations = 0;
    bool renorm_converged = true;
};

struct GrowthRecord {
    double t;
    double s_norm;      ///< ||u(t)||_S = sup|u| + sup|omega|
    double uinf_norm;   ///< |U_inf(t)|
    double fitted_rate; ///< C in ||u(t)||_S <= e^{C (1+|omega0|) t} ||u0||_S + |U_inf|
};

struct RunResult {
    Trajectory trajectory;
    std::vector<GrowthRecord> growth;
    std::vector<StepDiagnostics> steps;
    bool completed = true;
    std::string error; ///< first step failure when not completed
};

/// Semi-Lagrangian time stepper for the vorticity formulation: backward
/// RK4 characteristics, interpolation transport of omega, then velocity
/// recovery in the configured mode. The discretization mirrors the
/// definition of a bounded solution (transport along the flow map), which
/// is what keeps the sup norm of the vorticity under control.
class Solver {
  public:
    Solver(SolverConfig cfg, VectorField u0, std::optional<ScalarField> omega0 = {})
        : cfg_(std::move(cfg)), grid_(u0.grid) {
        if (!u0.finite()) throw InvalidArgument("solver: initial velocity not finite");
        omega0_ = omega0 ? std::move(*omega0) : curl(u0, edge_rule());
        if (omega0_.grid != grid_) throw InvalidArgument("solver: omega0 grid mismatch");
        u0_ = std::move(u0);

        double du = sup_norm_on(divergence(u0_, edge_rule()), probe_nodes(grid_, grid_.half_width / 2));
        if (du > 0.05 * (1.0 + sup_norm(u0_)))
            throw InvalidArgument("solver: initial velocity is not divergence-free (sup |div u0| = " +
                                  std::to_string(du) + ")");
        // state consistency: the supplied vorticity must be the curl of the
        // velocity up to discretization (relative L1, so a sharp rim's
        // stencil smear does not trip it but a rescaled field does)
        {
            ScalarField cw = curl(u0_, edge_rule());
            auto box = probe_nodes(grid_, grid_.half_width / 2);
            double dev = 0, mag = 0;
            for (std::size_t k : box) {
                dev += std::abs(cw.v[k] - omega0_.v[k]);
                mag += std::abs(omega0_.v[k]);
            }
            if (dev > std::max(0.5 * mag, 0.005 * box.size() * (1.0 + sup_norm(omega0_))))
                throw InvalidArgument("solver: omega0 is not consistent with curl(u0)");
        }

        if (!(cfg_.cfl > 0 && cfg_.cfl <= 1.0))
            throw InvalidArgument("solver: CFL number must lie in (0, 1]");
        double basis = sup_norm(u0_);
        for (Vec2 v : cfg_.uinf.values) basis = std::max(basis, sup_norm(u0_) + norm(v));
        basis = std::max(basis, 1e-12);
        double dt_max = cfg_.cfl * grid_.spacing / basis;
        if (cfg_.dt == 0) {
            int steps = std::max(1, static_cast<int>(std::ceil(cfg_.t_final / dt_max)));
            cfg_.dt = cfg_.t_final / steps;
        } else if (cfg_.dt > dt_max * (1 + 1e-12)) {
            throw InvalidArgument("solver: dt violates the CFL bound " + std::to_string(dt_max));
        }

        omega_min_ = omega0_.v.empty() ? 0 : *std::min_element(omega0_.v.begin(), omega0_.v.end());
        omega_max_ = omega0_.v.empty() ? 0 : *std::max_element(omega0_.v.begin(), omega0_.v.end());

        if (cfg_.mode == RecoveryMode::SerfatiFixedPoint)
            serfati_ = std::make_unique<SerfatiOperator>(grid_, cfg_.cutoff, cfg_.conv);
        if (cfg_.support_radius == 0) cfg_.support_radius = grid_.half_width;

        t_ = 0;
        omega_ = omega0_;
        u_ = u0_;
        if (serfati_) prev_tail_ = serfati_->tail_apply(u_);
        tail_integral_ = VectorField(grid_);
    }

    double dt() const { return cfg_.dt; }
    double time() const { return t_; }
    const ScalarField& omega() const { return omega_; }
    const VectorField& velocity() const { return u_; }
    const SolverConfig& config() const { return cfg_; }

    /// Departure points of the backward characteristics over one step from
    /// the current state, one 2-vector per node (the discrete flow-map
    /// sample X(t; t + dt, x)).
    VectorField flow_map_sample() const {
        VectorField out(grid_);
        const double box = interpolable_half_width(grid_, cfg_.interp);
        for (int j = 0; j < grid_.n; ++j)
            for (int i = 0; i < grid_.n; ++i)
                out.at(i, j) = departure(u_, grid_.point(i, j), cfg_.dt, box);
        if (!out.finite()) throw ConvergenceError("solver: departure points not finite");
        return out;
    }

    /// One transport + recovery step; returns per-step diagnostics.
    StepDiagnostics step() {
        const double dt = cfg_.dt;
        const double t_new = t_ + dt;
        StepDiagnostics diag;

        // (a) departure points by backward RK4 on the midpoint-extrapolated
        //     velocity 1.5 u^n - 0.5 u^{n-1} (second order in time for
        //     unsteady flows; identical to u^n for steady ones)
        // (b) transport: omega'(x) = omega(departure(x))
        VectorField advect(grid_);
        if (have_prev_u_) {
            for (std::size_t k = 0; k < advect.v.size(); ++k)
                advect.v[k] = 1.5 * u_.v[k] - 0.5 * prev_u_.v[k];
        } else {
            advect = u_;
        }
        ScalarField omega_new(grid_);
        const double box = interpolable_half_width(grid_, cfg_.interp);
        const double umax = sup_norm(advect);
        for (int j = 0; j < grid_.n; ++j)
            for (int i = 0; i < grid_.n; ++i) {
                Vec2 x = grid_.point(i, j);
                Vec2 d = departure(advect, x, dt, box);
                diag.max_displacement = std::max(diag.max_displacement, norm(d - x));
                double w = interpolate(omega_, query(d, box), cfg_.interp, cfg_.periodic);
                if (cfg_.clamp_transport) w = std::clamp(w, omega_min_, omega_max_);
                omega_new.at(i, j) = w;
            }
        if (diag.max_displacement > umax * dt * 1.2 + 1e-14)
            throw ConvergenceError("solver: flow-map displacement exceeded ||u|| dt");

        // (c) velocity recovery
        VectorField u_new(grid_);
        Vec2 uinf_new = cfg_.uinf.value(t_new);
        switch (cfg_.mode) {
        case RecoveryMode::Classical: {
            BsOptions opt;
            opt.mode = cfg_.conv;
            u_new = classical_bs(omega_new, cfg_.support_radius, opt);
            for (Vec2& v : u_new.v) v += uinf_new;
            break;
        }
        case RecoveryMode::Renormalized: {
            RenormalizeOptions opt;
            opt.tolerance = cfg_.renorm_tol;
            opt.probe_half_width = cfg_.renorm_probe_half;
            opt.mode = cfg_.conv;
            auto res = renormalized_bs(omega_new - omega0_, cfg_.cutoff, cfg_.schedule, opt);
            diag.renorm_converged = res.report.converged;
            if (!res.report.converged && sup_norm(omega_new - omega0_) > 1e-12)
                throw ConvergenceError("solver: renormalized Biot-Savart did not converge in R");
            for (std::size_t k = 0; k < u_new.v.size(); ++k)
                u_new.v[k] = u0_.v[k] + uinf_new + res.limit.v[k];
            break;
        }
        case RecoveryMode::SerfatiFixedPoint: {
            // Picard iteration on
            //   u <- u0 + U_inf + (aK) * (omega' - omega0) - [tail prefix]
            //        - dt/2 (W(u_prev) + W(u)),
            // with the prefix frozen from the stored per-step history.
            VectorField base = serfati_->near_convolve(omega_new - omega0_);
            for (std::size_t k = 0; k < base.v.size(); ++k)
                base.v[k] = u0_.v[k] + uinf_new + base.v[k] - tail_integral_.v[k] -
                            0.5 * dt * prev_tail_.v[k];
            VectorField cur = u_; // warm start from the previous velocity
            int it = 0;
            for (; it < cfg_.fp_max_iters; ++it) {
                VectorField w = serfati_->tail_apply(cur);
                VectorField next(grid_);
                for (std::size_t k = 0; k < next.v.size(); ++k)
                    next.v[k] = base.v[k] - 0.5 * dt * w.v[k];
                double diff = sup_norm(next - cur);
                cur = std::move(next);
                if (diff <= cfg_.fp_tol * (1.0 + sup_norm(cur))) break;
            }
            if (it >= cfg_.fp_max_iters)
                throw ConvergenceError("solver: Serfati fixed point did not converge");
            diag.fp_iterations = it + 1;
            u_new = std::move(cur);
            // advance the stored trapezoid prefix with the converged endpoint
            VectorField w_new = serfati_->tail_apply(u_new);
            for (std::size_t k = 0; k < tail_integral_.v.size(); ++k)
                tail_integral_.v[k] += 0.5 * dt * (prev_tail_.v[k] + w_new.v[k]);
            prev_tail_ = std::move(w_new);
            break;
        }
        }

        t_ = t_new;
        omega_ = std::move(omega_new);
        prev_u_ = std::move(u_);
        have_prev_u_ = true;
        u_ = std::move(u_new);
        return diag;
    }

  private:
    EdgeRule edge_rule() const { return cfg_.periodic ? EdgeRule::Periodic : EdgeRule::OneSided; }

    Vec2 query(Vec2 p, double box) const {
        return cfg_.periodic ? p : clamp_to_box(p, box);
    }

    Vec2 departure(const VectorField& field, Vec2 x, double dt, double box) const {
        auto vel = [&](Vec2 p) {
            return interpolate(field, query(p, box), cfg_.interp, cfg_.periodic);
        };
        Vec2 k1 = vel(x);
        Vec2 k2 = vel(x - (0.5 * dt) * k1);
        Vec2 k3 = vel(x - (0.5 * dt) * k2);
        Vec2 k4 = vel(x - dt * k3);
        return x - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    SolverConfig cfg_;
    Grid grid_;
    VectorField u0_, u_, prev_u_;
    bool have_prev_u_ = false;
    ScalarField omega0_, omega_;
    double omega_min_ = 0, omega_max_ = 0;
    double t_ = 0;
    std::unique_ptr<SerfatiOperator> serfati_;
    VectorField tail_integral_; ///< trapezoid prefix of the Serfati time integral
    VectorField prev_tail_;     ///< W(u) at the last completed step

    friend RunResult run(const SolverConfig&, const VectorField&, std::optional<ScalarField>);
};

/// Advances the initial data to t_final, storing snapshots at the
/// configured cadence and recording the growth monitor
/// ||u(t)||_S <= e^{C (1 + |omega0|) t} ||u0||_S + |U_inf(t)|.
/// A step failure aborts with the partial trajectory attached.
inline RunResult run(const SolverConfig& cfg, const VectorField& u0,
                     std::optional<ScalarField> omega0 = {}) {
    Solver solver(cfg, u0, std::move(omega0));
    RunResult out;
    out.trajectory.grid = u0.grid;
    out.trajectory.uinf = cfg.uinf;
    out.trajectory.cutoff = cfg.cutoff;
    out.trajectory.dt = solver.dt();

    const double s0 = sup_norm(u0) + sup_norm(solver.omega());
    const double w0 = sup_norm(solver.omega());
    auto record = [&](double t) {
        out.trajectory.snaps.push_back({t, solver.omega(), solver.velocity()});
        double s = sup_norm(solver.velocity()) + sup_norm(solver.omega());
        double uin = norm(cfg.uinf.value(t));
        double rate = 0;
        if (t > 0 && s > uin && s0 > 0)
            rate = std::log((s - uin) / s0) / ((1.0 + w0) * t);
        out.growth.push_back({t, s, uin, rate});
    };
    record(0.0);

    const int steps = static_cast<int>(std::llround(cfg.t_final / solver.dt()));
    if (std::abs(steps * solver.dt() - cfg.t_final) > 1e-9 * std::max(1.0, cfg.t_final))
        throw InvalidArgument("run: dt must divide t_final");
    for (int k = 1; k <= steps; ++k) {
        try {
            out.steps.push_back(solver.step());
        } catch (const std::exception& e) {
            // abort: the partial trajectory and diagnostics survive
            out.completed = false;
            out.error = e.what();
            if (out.trajectory.snaps.back().t < solver.time()) record(solver.time());
            return out;
        }
        if (k % cfg.snapshot_every == 0 || k == steps) record(solver.time());
    }
    out.trajectory.validate();
    return out;
}

enum class FrameDirection { Forward, Inverse };

/// Accelerated-frame change: forward removes the trajectory's U_inf path
/// (the new frame travels with it), inverse restores the path stashed by a
/// previous forward transform. Spatial evaluation is by interpolation, so
/// the total shift must stay well inside the box.
inline Trajectory transform_frame(const Trajectory& traj, FrameDirection dir,
                                  Interp scheme = Interp::Bicubic) {
    traj.validate();
    const UInfinityPath* path = nullptr;
    if (dir == FrameDirection::Forward) {
        path = &traj.uinf;
    } else {
        if (!traj.removed_uinf)
            throw InvalidArgument("transform_frame: inverse needs the path stored by forward");
        path = &*traj.removed_uinf;
    }
    const Grid& g = traj.grid;
    const double box = interpolable_half_width(g, scheme);
    Trajectory out;
    out.grid = g;
    out.cutoff = traj.cutoff;
    out.dt = traj.dt;
    for (const auto& s : traj.snaps) {
        Vec2 shift = path->integral(s.t);
        if (dir == FrameDirection::Inverse) shift = -shift;
        if (std::max(std::abs(shift.x), std::abs(shift.y)) > g.half_width / 2.0)
            throw DomainError("transform_frame: frame shift exits the grid box");
        Snapshot ns;
        ns.t = s.t;
        ns.omega = ScalarField(g);
        ns.u = VectorField(g);
        Vec2 uin = path->value(s.t);
        if (dir == FrameDirection::Inverse) uin = -uin;
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                Vec2 q = clamp_to_box(g.point(i, j) + shift, box);
                ns.omega.at(i, j) = interpolate(s.omega, q, scheme);
                ns.u.at(i, j) = interpolate(s.u, q, scheme) - uin;
            }
        out.snaps.push_back(std::move(ns));
    }
    if (dir == FrameDirection::Forward) {
        out.uinf = UInfinityPath::zero();
        out.removed_uinf = traj.uinf;
    } else {
        out.uinf = *path;
        out.removed_uinf.reset();
    }
    return out;
}

struct MollifyResult {
    VectorField u;
    ScalarField omega;
    double support_radius;
    double s_norm_ratio; ///< ||u_n||_S / ||u0||_S, monitored <= 2 eventually
};

/// Approximating datum u_n with compact vorticity: mollify omega at width
/// max(1/n, h), truncate by a radial cutoff at radius ~ n, rebuild the
/// velocity from the compact vorticity plus the probe-box mean offset.
inline MollifyResult mollify_truncate(const VectorField& u0, int n,
                                      ConvMode mode = ConvMode::Auto) {
    if (n < 1) throw InvalidArgument("mollify_truncate: need n >= 1");
    const Grid& g = u0.grid;
    ScalarField omega = curl(u0);
    const double delta = std::max(1.0 / n, g.spacing);

    // C^2 bump mollifier, normalized on the lattice
    double weight = 0;
    {
        int reach = static_cast<int>(std::ceil(delta / g.spacing));
        for (int j = -reach; j <= reach; ++j)
            for (int i = -reach; i <= reach; ++i) {
                double r = std::hypot(i * g.spacing, j * g.spacing) / delta;
                if (r < 1) weight += std::pow(1 - r * r, 3);
            }
        weight *= g.spacing * g.spacing;
    }
    const double inv_w = 1.0 / weight;
    ScalarField smooth = convolve(
        omega,
        std::function<double(Vec2)>([delta, inv_w](Vec2 z) {
            double r = norm(z) / delta;
            if (r >= 1) return 0.0;
            double q = 1 - r * r;
            return q * q * q * inv_w;
        }),
        mode);

    const double radius = std::min(static_cast<double>(n), 0.8 * g.half_width);
    RadialCutoff trunc = RadialCutoff::quintic(radius);
    ScalarField omega_n(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            omega_n.at(i, j) = smooth.at(i, j) * trunc.a(g.point(i, j));

    BsOptions opt;
    opt.mode = mode;
    VectorField un = classical_bs(omega_n, radius, opt);
    auto box = probe_nodes(g, g.half_width / 4.0);
    Vec2 offset = mean_on(u0, box) - mean_on(un, box);
    for (Vec2& v : un.v) v += offset;

    MollifyResult res;
    res.support_radius = radius;
    double s0 = sup_norm(u0) + sup_norm(omega);
    double sn = sup_norm(un) + sup_norm(omega_n);
    res.s_norm_ratio = s0 > 0 ? sn / s0 : 0.0;
    res.u = std::move(un);
    res.omega = std::move(omega_n);
    return res;
}

} // namespace euler2d

#endif

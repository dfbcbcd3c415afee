#ifndef EULER2D_SERFATI_HPP
#define EULER2D_SERFATI_HPP

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "euler2d/biot_savart.hpp"
#include "euler2d/common.hpp"
#include "euler2d/convolve.hpp"
#include "euler2d/cutoff.hpp"
#include "euler2d/field.hpp"
#include "euler2d/kernel.hpp"
#include "euler2d/trajectory.hpp"
#include "euler2d/uinf.hpp"

namespace euler2d {

/// Reads a sampled compact field as a convolution kernel on lattice offsets
/// (the field's own grid is centered at the origin, so offsets coincide
/// with nodes).
inline std::function<double(Vec2)> field_as_kernel(const ScalarField& h) {
    const Grid g = h.grid;
    return [g, h](Vec2 z) {
        int i = static_cast<int>(std::llround(z.x / g.spacing)) + g.n / 2;
        int j = static_cast<int>(std::llround(z.y / g.spacing)) + g.n / 2;
        if (!g.contains_index(i, j)) return 0.0;
        return h.at(i, j);
    };
}

/// Evaluator for the Serfati identity's right-hand side
///
///     rhs(t) = (a K) * (omega(t) - omega^0)
///              - int_0^t grad grad^perp [(1 - a) K] *. (u (x) u)(s) ds,
///
/// so that u(t) - u^0 - U_inf(t) = rhs(t) for a bounded solution. The tail
/// kernel is differentiated analytically; the time integral is composite
/// trapezoid over the stored snapshots. Kernel spectra are cached so a
/// whole trajectory can be scanned with a handful of transforms per
/// snapshot.
class SerfatiOperator {
  public:
    SerfatiOperator(const Grid& g, const RadialCutoff& a, ConvMode mode = ConvMode::Auto)
        : grid_(g), cutoff_(a), tail_(a), fft_(conv::use_fft(g, mode)) {
        if (a.support_radius() > g.half_width / 2.0)
            throw DomainError("serfati: cutoff support exceeds L/2");
        if (fft_) {
            near_spec_ = conv::tabulate_kernel(
                g, [this](Vec2 z) { return near_kernel(z).x; },
                [this](Vec2 z) { return near_kernel(z).y; });
            a_spec_ = conv::tabulate_kernel(
                g, [this](Vec2 z) { return tail_(z).A1; }, [this](Vec2 z) { return tail_(z).A2; });
            b_spec_ = conv::tabulate_kernel(
                g, [this](Vec2 z) { return tail_(z).B1; }, [this](Vec2 z) { return tail_(z).B2; });
        }
    }

    const RadialCutoff& cutoff() const { return cutoff_; }

    /// (a K) * f with the operator's cutoff at its own scale.
    VectorField near_convolve(const ScalarField& f) const {
        if (fft_) {
            auto fs = conv::forward_field(f);
            std::vector<fft::cplx> acc;
            conv::accumulate(acc, near_spec_, fs);
            return conv::inverse_packed(grid_, std::move(acc));
        }
        return convolve(f, [this](Vec2 z) { return near_kernel(z); }, ConvMode::Direct);
    }

    /// grad grad^perp [(1-a) K] *. (u (x) u) for one velocity snapshot.
    VectorField tail_apply(const VectorField& u) const {
        ScalarField d(grid_), m(grid_);
        for (std::size_t k = 0; k < u.v.size(); ++k) {
            Vec2 w = u.v[k];
            d.v[k] = w.y * w.y - w.x * w.x;
            m.v[k] = w.x * w.y;
        }
        if (fft_) {
            auto ds = conv::forward_field(d);
            auto ms = conv::forward_field(m);
            std::vector<fft::cplx> acc;
            conv::accumulate(acc, a_spec_, ds);
            conv::accumulate(acc, b_spec_, ms);
            return conv::inverse_packed(grid_, std::move(acc));
        }
        VectorField out(grid_);
        VectorField pa = convolve(d, std::function<Vec2(Vec2)>([this](Vec2 z) {
                                      auto p = tail_(z);
                                      return Vec2{p.A1, p.A2};
                                  }),
                                  ConvMode::Direct);
        VectorField pb = convolve(m, std::function<Vec2(Vec2)>([this](Vec2 z) {
                                      auto p = tail_(z);
                                      return Vec2{p.B1, p.B2};
                                  }),
                                  ConvMode::Direct);
        for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = pa.v[k] + pb.v[k];
        return out;
    }

    /// rhs at every snapshot time in one sweep (shared trapezoid prefix).
    std::vector<VectorField> rhs_all(const Trajectory& traj) const {
        check(traj);
        const auto& snaps = traj.snaps;
        std::vector<VectorField> out;
        out.reserve(snaps.size());
        VectorField integral(grid_);
        VectorField prev_w;
        double prev_t = 0;
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            VectorField w = tail_apply(snaps[k].u);
            if (k > 0) {
                double half = 0.5 * (snaps[k].t - prev_t);
                for (std::size_t j = 0; j < integral.v.size(); ++j)
                    integral.v[j] += half * (prev_w.v[j] + w.v[j]);
            }
            VectorField rhs = near_convolve(snaps[k].omega - snaps[0].omega);
            for (std::size_t j = 0; j < rhs.v.size(); ++j) rhs.v[j] -= integral.v[j];
            out.push_back(std::move(rhs));
            prev_w = std::move(w);
            prev_t = snaps[k].t;
        }
        return out;
    }

    VectorField rhs(const Trajectory& traj, double t) const {
        check(traj, t);
        const auto& snaps = traj.snaps;
        VectorField integral(grid_);
        VectorField prev_w;
        double prev_t = 0;
        for (std::size_t k = 0; k < snaps.size() && snaps[k].t <= t + 1e-12 * (1 + t); ++k) {
            VectorField w = tail_apply(snaps[k].u);
            if (k > 0) {
                double half = 0.5 * (snaps[k].t - prev_t);
                for (std::size_t j = 0; j < integral.v.size(); ++j)
                    integral.v[j] += half * (prev_w.v[j] + w.v[j]);
            }
            prev_w = std::move(w);
            prev_t = snaps[k].t;
        }
        VectorField rhs = near_convolve(traj.at_time(t).omega - snaps[0].omega);
        for (std::size_t j = 0; j < rhs.v.size(); ++j) rhs.v[j] -= integral.v[j];
        return rhs;
    }

  private:
    Vec2 near_kernel(Vec2 z) const {
        double c = cutoff_.a(z);
        if (c == 0.0) return {};
        return c * kernel::biot_savart(z);
    }

    void check(const Trajectory& traj, double t = -1) const {
        if (traj.grid != grid_) throw InvalidArgument("serfati: trajectory grid mismatch");
        if (t < 0 && !traj.snaps.empty()) t = traj.snaps.back().t;
        if (t > 0) {
            std::size_t within = 0;
            for (const auto& s : traj.snaps)
                if (s.t <= t + 1e-12 * (1 + t)) ++within;
            if (within < 3) {
                // fewer than 3 snapshots is fine only when nothing moved
                double drift = sup_norm(traj.at_time(t).omega - traj.snaps.front().omega);
                if (drift > 1e-12)
                    throw InvalidArgument(
                        "serfati: need at least 3 snapshots in [0, t] for the time quadrature");
            }
        }
    }

    Grid grid_;
    RadialCutoff cutoff_;
    kernel::SerfatiTailKernel tail_;
    bool fft_;
    conv::KernelSpectrum near_spec_, a_spec_, b_spec_;
};

inline VectorField serfati_rhs(const Trajectory& traj, double t, const RadialCutoff& a,
                               ConvMode mode = ConvMode::Auto) {
    return SerfatiOperator(traj.grid, a, mode).rhs(traj, t);
}

/// Serfati residual field u(t) - u^0 - U_inf(t) - rhs(t); zero for an exact
/// bounded solution.
struct SerfatiResidual {
    std::vector<double> times;
    std::vector<double> sup;       ///< sup norm on the probe box
    std::vector<Vec2> mean;        ///< probe-box mean of the bracket minus U_inf
    std::vector<double> deviation; ///< probe-box standard deviation
    VectorField last_residual;     ///< the per-node residual field at the final time
    UInfinityPath uinf;            ///< the path the residual was computed against
    double probe_half_width = 0;
    std::string cutoff_profile;

    std::string to_text() const {
        std::string s = "# serfati residual report (cutoff profile " + cutoff_profile + ")\n";
        char buf[200];
        std::snprintf(buf, sizeof buf, "# probe_half_width %.17g\n", probe_half_width);
        s += buf;
        s += "# columns: t sup_residual mean_x mean_y deviation\n";
        for (std::size_t k = 0; k < times.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g\n", times[k], sup[k],
                          mean[k].x, mean[k].y, deviation[k]);
            s += buf;
        }
        return s;
    }
};

/// Evaluates the residual of the identity over a whole trajectory, using
/// the trajectory's own U_inf path.
inline SerfatiResidual serfati_residual(const Trajectory& traj, const RadialCutoff& a,
                                        double probe_half_width = 0,
                                        ConvMode mode = ConvMode::Auto) {
    traj.validate();
    SerfatiOperator op(traj.grid, a, mode);
    double probe = probe_half_width > 0 ? probe_half_width : traj.grid.half_width / 4.0;
    auto box = probe_nodes(traj.grid, probe);
    auto rhs = op.rhs_all(traj);
    SerfatiResidual res;
    res.probe_half_width = probe;
    res.cutoff_profile = a.profile_name;
    res.uinf = traj.uinf;
    const VectorField& u0 = traj.snaps.front().u;
    for (std::size_t k = 0; k < traj.snaps.size(); ++k) {
        Vec2 uin = traj.uinf.value(traj.snaps[k].t);
        VectorField r(traj.grid);
        for (std::size_t j = 0; j < r.v.size(); ++j)
            r.v[j] = traj.snaps[k].u.v[j] - u0.v[j] - uin - rhs[k].v[j];
        res.times.push_back(traj.snaps[k].t);
        res.sup.push_back(sup_norm_on(r, box));
        res.mean.push_back(mean_on(r, box));
        res.deviation.push_back(stddev_on(r, box));
        if (k + 1 == traj.snaps.size()) res.last_residual = std::move(r);
    }
    return res;
}

struct ExtractedUinf {
    UInfinityPath path;
    std::vector<double> deviation; ///< x-independence diagnostic per time
    double tolerance = 0;
    bool identity_warning = false; ///< some deviation exceeded the tolerance
};

/// Recovers the weak velocity at infinity from a trajectory: U_inf(t) is
/// the probe-box average of u(t) - u^0 - rhs(t), a field the identity says
/// is constant in x. The spatial standard deviation of that bracket is
/// reported; it is never silently discarded.
inline ExtractedUinf extract_uinfty(const Trajectory& traj, const RadialCutoff& a,
                                    double deviation_tolerance = 1e-2,
                                    double probe_half_width = 0, ConvMode mode = ConvMode::Auto) {
    traj.validate();
    SerfatiOperator op(traj.grid, a, mode);
    double probe = probe_half_width > 0 ? probe_half_width : traj.grid.half_width / 4.0;
    auto box = probe_nodes(traj.grid, probe);
    auto rhs = op.rhs_all(traj);

    ExtractedUinf out;
    out.tolerance = deviation_tolerance;
    std::vector<double> times;
    std::vector<Vec2> values;
    const VectorField& u0 = traj.snaps.front().u;
    for (std::size_t k = 0; k < traj.snaps.size(); ++k) {
        VectorField bracket(traj.grid);
        for (std::size_t j = 0; j < bracket.v.size(); ++j)
            bracket.v[j] = traj.snaps[k].u.v[j] - u0.v[j] - rhs[k].v[j];
        Vec2 mu = mean_on(bracket, box);
        double dev = stddev_on(bracket, box);
        if (k == 0) mu = Vec2{}; // exact by construction: all terms vanish at t = 0
        times.push_back(traj.snaps[k].t);
        values.push_back(mu);
        out.deviation.push_back(dev);
        if (dev > deviation_tolerance) out.identity_warning = true;
    }
    if (times.size() == 1) {
        out.path = UInfinityPath::zero();
    } else {
        out.path = UInfinityPath(std::move(times), std::move(values));
    }
    return out;
}

/// Residual of the compact-test-field identity
///     h * (omega(t) - omega^0) = - int_0^t grad grad^perp h *. (u (x) u) ds
/// with the second derivatives of the sampled h taken by stencils. Returns
/// the sup over the probe box of | lhs + integral |.
inline double gamma_identity_residual(const ScalarField& h, const Trajectory& traj, double t,
                                      double probe_half_width = 0,
                                      ConvMode mode = ConvMode::Auto) {
    traj.validate();
    if (h.grid != traj.grid) throw InvalidArgument("gamma residual: test field grid mismatch");
    // support must stay clear of the boundary so the stencil derivatives
    // see the whole bump
    {
        const int n = h.grid.n;
        double peak = sup_norm(h);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if ((i < 2 || i >= n - 2 || j < 2 || j >= n - 2) &&
                    std::abs(h.at(i, j)) > 1e-12 * peak)
                    throw DomainError("gamma residual: test field support touches the boundary");
    }
    ScalarField hx = ddx(h), hy = ddy(h);
    ScalarField h11 = ddx(hx), h12 = ddy(hx), h22 = ddy(hy);
    // contraction kernels: A = d1 d2 h, B = d11 h - d22 h (see the tail
    // kernel derivation)
    ScalarField A = h12, B = h11 - h22;
    auto kern_a = field_as_kernel(A);
    auto kern_b = field_as_kernel(B);

    double probe = probe_half_width > 0 ? probe_half_width : traj.grid.half_width / 4.0;
    auto box = probe_nodes(traj.grid, probe);

    ScalarField integral(traj.grid);
    ScalarField prev(traj.grid);
    double prev_t = 0;
    bool have_prev = false;
    for (const auto& s : traj.snaps) {
        if (s.t > t + 1e-12 * (1 + t)) break;
        ScalarField d(traj.grid), m(traj.grid);
        for (std::size_t k = 0; k < s.u.v.size(); ++k) {
            Vec2 w = s.u.v[k];
            d.v[k] = w.y * w.y - w.x * w.x;
            m.v[k] = w.x * w.y;
        }
        ScalarField wa = convolve(d, kern_a, mode);
        ScalarField wb = convolve(m, kern_b, mode);
        ScalarField w(traj.grid);
        for (std::size_t k = 0; k < w.v.size(); ++k) w.v[k] = wa.v[k] + wb.v[k];
        if (have_prev) {
            double half = 0.5 * (s.t - prev_t);
            for (std::size_t k = 0; k < integral.v.size(); ++k)
                integral.v[k] += half * (prev.v[k] + w.v[k]);
        }
        prev = std::move(w);
        prev_t = s.t;
        have_prev = true;
    }
    ScalarField lhs = convolve(traj.at_time(t).omega - traj.snaps.front().omega,
                               field_as_kernel(h), mode);
    double worst = 0;
    for (std::size_t k : box) worst = std::max(worst, std::abs(lhs.v[k] + integral.v[k]));
    return worst;
}

/// Prop. of cutoff independence: the identity's rhs does not depend on the
/// cutoff. Returns the sup over the probe box of rhs_a - rhs_b.
inline double cutoff_independence(const Trajectory& traj, double t, const RadialCutoff& a,
                                  const RadialCutoff& b, double probe_half_width = 0,
                                  ConvMode mode = ConvMode::Auto) {
    VectorField ra = serfati_rhs(traj, t, a, mode);
    VectorField rb = serfati_rhs(traj, t, b, mode);
    double probe = probe_half_width > 0 ? probe_half_width : traj.grid.half_width / 4.0;
    return sup_norm_on(ra - rb, probe_nodes(traj.grid, probe));
}

/// grad f *. v = f * div v for compact f. Returns the probe-box sup of the
/// discrete difference.
inline double stardot_identity_check(const ScalarField& f, const VectorField& v,
                                     double probe_half_width = 0,
                                     ConvMode mode = ConvMode::Auto) {
    if (f.grid != v.grid) throw InvalidArgument("stardot check: grid mismatch");
    {
        const int n = f.grid.n;
        double peak = sup_norm(f);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if ((i < 2 || i >= n - 2 || j < 2 || j >= n - 2) &&
                    std::abs(f.at(i, j)) > 1e-12 * peak)
                    throw DomainError("stardot check: test field support touches the boundary");
    }
    ScalarField fx = ddx(f), fy = ddy(f);
    ScalarField lhs1 = convolve(v.component(0), field_as_kernel(fx), mode);
    ScalarField lhs2 = convolve(v.component(1), field_as_kernel(fy), mode);
    ScalarField rhs = convolve(divergence(v), field_as_kernel(f), mode);
    double probe = probe_half_width > 0 ? probe_half_width : f.grid.half_width / 4.0;
    double worst = 0;
    for (std::size_t k : probe_nodes(f.grid, probe))
        worst = std::max(worst, std::abs(lhs1.v[k] + lhs2.v[k] - rhs.v[k]));
    return worst;
}

} // namespace euler2d

#endif

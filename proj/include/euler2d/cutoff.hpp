#ifndef EULER2D_CUTOFF_HPP
#define EULER2D_CUTOFF_HPP

#include <cmath>
#include <string>

#include "euler2d/common.hpp"

namespace euler2d {

/// Smooth radial cutoff a_R(x) = profile(|x| / R): identically 1 on
/// [0, inner*R], identically 0 beyond outer*R, at least C^2 in between.
/// Radial symmetry is exact because evaluation goes through |x|.
///
/// Two profiles are provided. "quintic" is the degree-5 smoothstep (C^2 at
/// the joins). "exp" is the classical C-infinity bump transition. Results
/// must always be reported with the profile named; the identities of the
/// theory are cutoff-independent and the test suite checks that.
struct RadialCutoff {
    std::string profile_name = "quintic";
    double inner = 0.5; ///< r0: profile == 1 on [0, r0]
    double outer = 1.0; ///< r1: profile == 0 on [r1, inf)
    double scale = 1.0; ///< R

    RadialCutoff() = default;
    RadialCutoff(std::string name, double R, double r0 = 0.5, double r1 = 1.0)
        : profile_name(std::move(name)), inner(r0), outer(r1), scale(R) {
        if (!(0 < inner && inner < outer)) throw InvalidArgument("cutoff: need 0 < r0 < r1");
        if (!(scale > 0)) throw InvalidArgument("cutoff: scale must be positive");
        if (profile_name != "quintic" && profile_name != "exp")
            throw InvalidArgument("cutoff: unknown profile '" + profile_name + "'");
    }

    static RadialCutoff quintic(double R) { return RadialCutoff("quintic", R); }
    static RadialCutoff smooth_exp(double R) { return RadialCutoff("exp", R); }

    RadialCutoff with_scale(double R) const {
        RadialCutoff c = *this;
        if (!(R > 0)) throw InvalidArgument("cutoff: scale must be positive");
        c.scale = R;
        return c;
    }

    double support_radius() const { return outer * scale; }
    double plateau_radius() const { return inner * scale; }

    /// profile(t) on the normalized argument t = |x| / R.
    double profile(double t) const {
        if (t <= inner) return 1.0;
        if (t >= outer) return 0.0;
        double s = (t - inner) / (outer - inner);
        if (profile_name == "quintic")
            return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
        // exp: f(1-s) / (f(1-s) + f(s)) with f(t) = exp(-1/t)
        double fa = std::exp(-1.0 / (1.0 - s));
        double fb = std::exp(-1.0 / s);
        return fa / (fa + fb);
    }

    double dprofile(double t) const {
        if (t <= inner || t >= outer) return 0.0;
        double w = outer - inner;
        double s = (t - inner) / w;
        if (profile_name == "quintic")
            return -30.0 * s * s * (1.0 - s) * (1.0 - s) / w;
        double fa = std::exp(-1.0 / (1.0 - s)); // f(1-s)
        double fb = std::exp(-1.0 / s);
        double dfa = -fa / ((1.0 - s) * (1.0 - s)); // d/ds f(1-s)
        double dfb = fb / (s * s);                  // d/ds f(s)
        double den = fa + fb;
        return (dfa * fb - fa * dfb) / (den * den) / w;
    }

    double d2profile(double t) const {
        if (t <= inner || t >= outer) return 0.0;
        double w = outer - inner;
        double s = (t - inner) / w;
        if (profile_name == "quintic")
            return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / (w * w);
        // central difference on dprofile keeps the "exp" branch free of
        // hand-derived algebra
        double d = 1e-6 * w;
        if (t - d <= inner || t + d >= outer) d = 0.49 * std::min(t - inner, outer - t);
        return (dprofile(t + d) - dprofile(t - d)) / (2 * d);
    }

    /// a_R at a point.
    double a(Vec2 z) const { return profile(norm(z) / scale); }

    /// grad a_R; zero at the origin and outside the transition annulus.
    Vec2 grad_a(Vec2 z) const {
        double r = norm(z);
        if (r == 0) return {};
        double d = dprofile(r / scale) / scale;
        if (d == 0) return {};
        return (d / r) * z;
    }

    /// Hessian of a_R.
    Mat2 hess_a(Vec2 z) const {
        double r = norm(z);
        if (r == 0) return {};
        double t = r / scale;
        double d1 = dprofile(t) / scale;
        double d2 = d2profile(t) / (scale * scale);
        if (d1 == 0 && d2 == 0) return {};
        double ex = z.x / r, ey = z.y / r;
        Mat2 m;
        m.a11 = d2 * ex * ex + d1 * (1 - ex * ex) / r;
        m.a22 = d2 * ey * ey + d1 * (1 - ey * ey) / r;
        m.a12 = m.a21 = (d2 - d1 / r) * ex * ey;
        return m;
    }
};

} // namespace euler2d

#endif

#ifndef EULER2D_INITIAL_DATA_HPP
#define EULER2D_INITIAL_DATA_HPP

#include <cmath>
#include <string>

#include "euler2d/biot_savart.hpp"
#include "euler2d/field.hpp"

namespace euler2d {
namespace initial_data {

struct InitialData {
    std::string name;
    VectorField u;
    ScalarField omega;
    double support_radius = 0; ///< 0: vorticity is not compact
};

/// Steady unidirectional shear u = (sin x2, 0), omega = -cos x2. Exactly
/// 2L-periodic when L is a multiple of pi.
inline InitialData shear(const Grid& g, double amplitude = 1.0) {
    InitialData d;
    d.name = "shear";
    d.u = VectorField::sample(g, [=](Vec2 p) { return Vec2{amplitude * std::sin(p.y), 0.0}; });
    d.omega = ScalarField::sample(g, [=](Vec2 p) { return -amplitude * std::cos(p.y); });
    return d;
}

/// Sharp unit-disk vortex patch with the analytic steady velocity
/// (tangential speed r/2 inside, 1/(2r) outside, scaled by the amplitude).
inline InitialData disk_patch(const Grid& g, double radius = 1.0, double amplitude = 1.0) {
    InitialData d;
    d.name = "disk-patch";
    d.support_radius = radius;
    d.omega = ScalarField::sample(
        g, [=](Vec2 p) { return norm(p) <= radius ? amplitude : 0.0; });
    d.u = VectorField::sample(g, [=](Vec2 p) {
        double r = norm(p);
        if (r == 0) return Vec2{};
        double speed = amplitude * ((r <= radius) ? r / 2.0 : radius * radius / (2.0 * r));
        return (speed / r) * perp(p);
    });
    return d;
}

/// Smooth radial patch: omega = amplitude * q(r / radius) with the C^2
/// quintic plateau profile; the velocity is the discrete Biot-Savart of the
/// sampled vorticity, so the pair is consistent on the grid.
inline InitialData smooth_patch(const Grid& g, double radius = 1.0, double amplitude = 1.0,
                                ConvMode mode = ConvMode::Auto) {
    InitialData d;
    d.name = "smooth-patch";
    d.support_radius = radius;
    RadialCutoff prof = RadialCutoff::quintic(radius);
    d.omega = ScalarField::sample(g, [&](Vec2 p) { return amplitude * prof.a(p); });
    BsOptions opt;
    opt.mode = mode;
    d.u = classical_bs(d.omega, radius, opt);
    return d;
}

inline InitialData gaussian_blob(const Grid& g, double sigma = 0.8, double amplitude = 0.5,
                                 Vec2 center = {}, ConvMode mode = ConvMode::Auto) {
    InitialData d;
    d.name = "gaussian-blob";
    d.support_radius = std::min(norm(center) + 6.5 * sigma, g.half_width);
    d.omega = ScalarField::sample(g, [=](Vec2 p) {
        return amplitude * std::exp(-norm_sq(p - center) / (2 * sigma * sigma));
    });
    BsOptions opt;
    opt.mode = mode;
    d.u = classical_bs(d.omega, d.support_radius, opt);
    return d;
}

/// Two opposite-signed blobs: zero total vorticity, velocity decays faster
/// than any single blob.
inline InitialData dipole(const Grid& g, double separation = 1.5, double sigma = 0.4,
                          double amplitude = 1.0, ConvMode mode = ConvMode::Auto) {
    InitialData d;
    d.name = "dipole";
    Vec2 c{separation / 2.0, 0.0};
    d.support_radius = std::min(separation / 2.0 + 6.5 * sigma, g.half_width);
    d.omega = ScalarField::sample(g, [=](Vec2 p) {
        double s2 = 2 * sigma * sigma;
        return amplitude *
               (std::exp(-norm_sq(p - c) / s2) - std::exp(-norm_sq(p + c) / s2));
    });
    BsOptions opt;
    opt.mode = mode;
    d.u = classical_bs(d.omega, d.support_radius, opt);
    return d;
}

/// Non-decaying datum: shear plus a compact blob; vorticity is bounded but
/// has no decay at infinity.
inline InitialData shear_plus_blob(const Grid& g, double shear_amp = 0.5, double sigma = 0.8,
                                   double blob_amp = 0.5, ConvMode mode = ConvMode::Auto) {
    InitialData d;
    d.name = "shear-plus-blob";
    InitialData blob = gaussian_blob(g, sigma, blob_amp, {}, mode);
    d.u = VectorField(g);
    d.omega = ScalarField(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            Vec2 p = g.point(i, j);
            d.u.at(i, j) = blob.u.at(i, j) + Vec2{shear_amp * std::sin(p.y), 0.0};
            d.omega.at(i, j) = blob.omega.at(i, j) - shear_amp * std::cos(p.y);
        }
    return d;
}

} // namespace initial_data
} // namespace euler2d

#endif

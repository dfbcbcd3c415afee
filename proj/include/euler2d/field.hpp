#ifndef EULER2D_FIELD_HPP
#define EULER2D_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "euler2d/common.hpp"
#include "euler2d/grid.hpp"

namespace euler2d {

/// How derivative stencils treat the boundary ring.
enum class EdgeRule {
    OneSided, ///< second-order one-sided stencils at the edge
    Periodic  ///< wrap around (valid when the sampled data is 2L-periodic)
};

enum class Interp { Bilinear, Bicubic };

struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& at(int i, int j) { return v[grid.index(i, j)]; }
    double at(int i, int j) const { return v[grid.index(i, j)]; }

    static ScalarField sample(const Grid& g, const std::function<double(Vec2)>& f) {
        ScalarField out(g);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                out.at(i, j) = f(g.point(i, j));
        return out;
    }

    bool finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

struct VectorField {
    Grid grid;
    std::vector<Vec2> v;

    VectorField() = default;
    explicit VectorField(const Grid& g, Vec2 fill = {}) : grid(g), v(g.size(), fill) {}

    Vec2& at(int i, int j) { return v[grid.index(i, j)]; }
    Vec2 at(int i, int j) const { return v[grid.index(i, j)]; }

    static VectorField sample(const Grid& g, const std::function<Vec2(Vec2)>& f) {
        VectorField out(g);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                out.at(i, j) = f(g.point(i, j));
        return out;
    }

    ScalarField component(int c) const {
        ScalarField out(grid);
        for (std::size_t k = 0; k < v.size(); ++k)
            out.v[k] = (c == 0) ? v[k].x : v[k].y;
        return out;
    }

    bool finite() const {
        for (Vec2 x : v)
            if (!std::isfinite(x.x) || !std::isfinite(x.y)) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// field arithmetic / statistics

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid) throw InvalidArgument("field difference: grids differ");
    ScalarField out(a.grid);
    for (std::size_t k = 0; k < a.v.size(); ++k) out.v[k] = a.v[k] - b.v[k];
    return out;
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
    if (a.grid != b.grid) throw InvalidArgument("field difference: grids differ");
    VectorField out(a.grid);
    for (std::size_t k = 0; k < a.v.size(); ++k) out.v[k] = a.v[k] - b.v[k];
    return out;
}

inline VectorField operator+(const VectorField& a, const VectorField& b) {
    if (a.grid != b.grid) throw InvalidArgument("field sum: grids differ");
    VectorField out(a.grid);
    for (std::size_t k = 0; k < a.v.size(); ++k) out.v[k] = a.v[k] + b.v[k];
    return out;
}

inline double sup_norm(const ScalarField& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

inline double sup_norm(const VectorField& f) {
    double m = 0;
    for (Vec2 x : f.v) m = std::max(m, norm(x));
    return m;
}

inline double sup_norm_on(const ScalarField& f, const std::vector<std::size_t>& idx) {
    double m = 0;
    for (std::size_t k : idx) m = std::max(m, std::abs(f.v[k]));
    return m;
}

inline double sup_norm_on(const VectorField& f, const std::vector<std::size_t>& idx) {
    double m = 0;
    for (std::size_t k : idx) m = std::max(m, norm(f.v[k]));
    return m;
}

inline Vec2 mean_on(const VectorField& f, const std::vector<std::size_t>& idx) {
    Vec2 s{};
    for (std::size_t k : idx) s += f.v[k];
    return (1.0 / static_cast<double>(idx.size())) * s;
}

inline double mean_on(const ScalarField& f, const std::vector<std::size_t>& idx) {
    double s = 0;
    for (std::size_t k : idx) s += f.v[k];
    return s / static_cast<double>(idx.size());
}

/// Component-wise standard deviation around the mean, reduced to a scalar
/// by the Euclidean norm. Used as the x-independence diagnostic.
inline double stddev_on(const VectorField& f, const std::vector<std::size_t>& idx) {
    Vec2 mu = mean_on(f, idx);
    double sx = 0, sy = 0;
    for (std::size_t k : idx) {
        Vec2 d = f.v[k] - mu;
        sx += d.x * d.x;
        sy += d.y * d.y;
    }
    double inv = 1.0 / static_cast<double>(idx.size());
    return std::sqrt(sx * inv + sy * inv);
}

// ---------------------------------------------------------------------------
// finite differences (centered second order inside, one-sided or periodic
// at the boundary ring)

namespace detail {

inline double ddx(const ScalarField& f, int i, int j, EdgeRule e) {
    const int n = f.grid.n;
    const double h = f.grid.spacing;
    if (e == EdgeRule::Periodic) {
        int ip = (i + 1) % n, im = (i + n - 1) % n;
        return (f.at(ip, j) - f.at(im, j)) / (2 * h);
    }
    if (i == 0) return (-3 * f.at(0, j) + 4 * f.at(1, j) - f.at(2, j)) / (2 * h);
    if (i == n - 1) return (3 * f.at(n - 1, j) - 4 * f.at(n - 2, j) + f.at(n - 3, j)) / (2 * h);
    return (f.at(i + 1, j) - f.at(i - 1, j)) / (2 * h);
}

inline double ddy(const ScalarField& f, int i, int j, EdgeRule e) {
    const int n = f.grid.n;
    const double h = f.grid.spacing;
    if (e == EdgeRule::Periodic) {
        int jp = (j + 1) % n, jm = (j + n - 1) % n;
        return (f.at(i, jp) - f.at(i, jm)) / (2 * h);
    }
    if (j == 0) return (-3 * f.at(i, 0) + 4 * f.at(i, 1) - f.at(i, 2)) / (2 * h);
    if (j == n - 1) return (3 * f.at(i, n - 1) - 4 * f.at(i, n - 2) + f.at(i, n - 3)) / (2 * h);
    return (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * h);
}

} // namespace detail

inline ScalarField ddx(const ScalarField& f, EdgeRule e = EdgeRule::OneSided) {
    ScalarField out(f.grid);
    for (int j = 0; j < f.grid.n; ++j)
        for (int i = 0; i < f.grid.n; ++i)
            out.at(i, j) = detail::ddx(f, i, j, e);
    return out;
}

inline ScalarField ddy(const ScalarField& f, EdgeRule e = EdgeRule::OneSided) {
    ScalarField out(f.grid);
    for (int j = 0; j < f.grid.n; ++j)
        for (int i = 0; i < f.grid.n; ++i)
            out.at(i, j) = detail::ddy(f, i, j, e);
    return out;
}

/// Scalar curl: omega(u) = d1 u2 - d2 u1.
inline ScalarField curl(const VectorField& u, EdgeRule e = EdgeRule::OneSided) {
    ScalarField u1 = u.component(0), u2 = u.component(1);
    ScalarField out(u.grid);
    for (int j = 0; j < u.grid.n; ++j)
        for (int i = 0; i < u.grid.n; ++i)
            out.at(i, j) = detail::ddx(u2, i, j, e) - detail::ddy(u1, i, j, e);
    return out;
}

inline ScalarField divergence(const VectorField& u, EdgeRule e = EdgeRule::OneSided) {
    ScalarField u1 = u.component(0), u2 = u.component(1);
    ScalarField out(u.grid);
    for (int j = 0; j < u.grid.n; ++j)
        for (int i = 0; i < u.grid.n; ++i)
            out.at(i, j) = detail::ddx(u1, i, j, e) + detail::ddy(u2, i, j, e);
    return out;
}

inline VectorField gradient(const ScalarField& f, EdgeRule e = EdgeRule::OneSided) {
    VectorField out(f.grid);
    for (int j = 0; j < f.grid.n; ++j)
        for (int i = 0; i < f.grid.n; ++i)
            out.at(i, j) = {detail::ddx(f, i, j, e), detail::ddy(f, i, j, e)};
    return out;
}

/// Velocity-gradient tensor per node: (du^m/dx_l) as Mat2 with
/// a(l+1)(m+1) = d_l u^m, i.e. a11 = d1 u1, a12 = d1 u2, ...
inline std::vector<Mat2> velocity_gradient(const VectorField& u, EdgeRule e = EdgeRule::OneSided) {
    ScalarField u1 = u.component(0), u2 = u.component(1);
    std::vector<Mat2> out(u.grid.size());
    for (int j = 0; j < u.grid.n; ++j)
        for (int i = 0; i < u.grid.n; ++i) {
            Mat2 m;
            m.a11 = detail::ddx(u1, i, j, e);
            m.a12 = detail::ddx(u2, i, j, e);
            m.a21 = detail::ddy(u1, i, j, e);
            m.a22 = detail::ddy(u2, i, j, e);
            out[u.grid.index(i, j)] = m;
        }
    return out;
}

/// div div (u (x) u) collapsed with div u = 0: sum_lm d_l u^m d_m u^l.
inline ScalarField div_div_outer(const VectorField& u, EdgeRule e = EdgeRule::OneSided) {
    auto g = velocity_gradient(u, e);
    ScalarField out(u.grid);
    for (std::size_t k = 0; k < g.size(); ++k)
        out.v[k] = g[k].a11 * g[k].a11 + 2.0 * g[k].a12 * g[k].a21 + g[k].a22 * g[k].a22;
    return out;
}

// ---------------------------------------------------------------------------
// interpolation

namespace detail {

/// Four-point Lagrange weights at unit-spaced nodes {-1, 0, 1, 2},
/// exact on cubics.
inline void lagrange4(double t, double w[4]) {
    w[0] = -t * (t - 1) * (t - 2) / 6.0;
    w[1] = (t + 1) * (t - 1) * (t - 2) / 2.0;
    w[2] = -(t + 1) * t * (t - 2) / 2.0;
    w[3] = (t + 1) * t * (t - 1) / 6.0;
}

struct InterpLocator {
    int i0, j0;   // base node
    double fx, fy; // fractional offsets in [0, 1)
};

inline InterpLocator locate(const Grid& g, Vec2 x, Interp scheme, bool wrap) {
    double gx = (x.x + g.half_width) / g.spacing;
    double gy = (x.y + g.half_width) / g.spacing;
    if (wrap) {
        double n = g.n;
        gx = gx - n * std::floor(gx / n);
        gy = gy - n * std::floor(gy / n);
    }
    int i0 = static_cast<int>(std::floor(gx));
    int j0 = static_cast<int>(std::floor(gy));
    if (!wrap) {
        const int lo = (scheme == Interp::Bicubic) ? 1 : 0;
        const int hi = (scheme == Interp::Bicubic) ? g.n - 3 : g.n - 2;
        if (i0 < lo || i0 > hi || j0 < lo || j0 > hi)
            throw DomainError("interpolate: point outside the interpolable region");
    }
    return {i0, j0, gx - i0, gy - j0};
}

template <class Field, class Value>
Value interp_impl(const Field& f, Vec2 x, Interp scheme, bool wrap) {
    const Grid& g = f.grid;
    auto loc = locate(g, x, scheme, wrap);
    auto node = [&](int i, int j) {
        if (wrap) {
            i = ((i % g.n) + g.n) % g.n;
            j = ((j % g.n) + g.n) % g.n;
        }
        return f.at(i, j);
    };
    if (scheme == Interp::Bilinear) {
        double fx = loc.fx, fy = loc.fy;
        Value v00 = node(loc.i0, loc.j0), v10 = node(loc.i0 + 1, loc.j0);
        Value v01 = node(loc.i0, loc.j0 + 1), v11 = node(loc.i0 + 1, loc.j0 + 1);
        return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
    }
    double wx[4], wy[4];
    lagrange4(loc.fx, wx);
    lagrange4(loc.fy, wy);
    Value acc{};
    for (int b = 0; b < 4; ++b) {
        Value row{};
        for (int a = 0; a < 4; ++a)
            row += wx[a] * node(loc.i0 - 1 + a, loc.j0 - 1 + b);
        acc += wy[b] * row;
    }
    return acc;
}

} // namespace detail

inline double interpolate(const ScalarField& f, Vec2 x, Interp scheme = Interp::Bicubic,
                          bool wrap = false) {
    return detail::interp_impl<ScalarField, double>(f, x, scheme, wrap);
}

inline Vec2 interpolate(const VectorField& f, Vec2 x, Interp scheme = Interp::Bicubic,
                        bool wrap = false) {
    return detail::interp_impl<VectorField, Vec2>(f, x, scheme, wrap);
}

/// Largest |coordinate| an interpolation query may have; clamping to this
/// box keeps semi-Lagrangian departure points legal near the edge.
inline double interpolable_half_width(const Grid& g, Interp scheme) {
    int margin = (scheme == Interp::Bicubic) ? 2 : 1;
    return g.half_width - (margin + 1) * g.spacing;
}

inline Vec2 clamp_to_box(Vec2 x, double half) {
    return {std::clamp(x.x, -half, half), std::clamp(x.y, -half, half)};
}

} // namespace euler2d

#endif

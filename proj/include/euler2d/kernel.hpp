#ifndef EULER2D_KERNEL_HPP
#define EULER2D_KERNEL_HPP

#include <array>
#include <cmath>

#include "euler2d/common.hpp"
#include "euler2d/cutoff.hpp"

namespace euler2d {
namespace kernel {

/// Biot-Savart kernel K(x) = (1/2pi) x^perp / |x|^2.
/// The value at the origin is taken as 0: the kernel is antisymmetric, so
/// its average over any centered cell vanishes, which is exactly the
/// singular-cell treatment the quadrature relies on.
inline Vec2 biot_savart(Vec2 z) {
    double r2 = norm_sq(z);
    if (r2 == 0) return {};
    return (1.0 / (2.0 * pi * r2)) * perp(z);
}

/// K^perp(x) = -(1/2pi) x / |x|^2, i.e. minus the gradient of the Green's
/// function for the Laplacian. Antisymmetric; origin value 0.
inline Vec2 k_perp(Vec2 z) {
    double r2 = norm_sq(z);
    if (r2 == 0) return {};
    return (-1.0 / (2.0 * pi * r2)) * z;
}

namespace detail {

/// First derivatives of f_k(x) = x_k / |x|^2: d_l f_k.
inline double d1_xk_over_r2(Vec2 z, int k, int l, double r2) {
    double xk = (k == 0) ? z.x : z.y;
    double xl = (l == 0) ? z.x : z.y;
    double del = (k == l) ? 1.0 : 0.0;
    return del / r2 - 2.0 * xk * xl / (r2 * r2);
}

/// Second derivatives of f_k(x) = x_k / |x|^2: d_m d_l f_k.
inline double d2_xk_over_r2(Vec2 z, int k, int l, int m, double r2) {
    double x[2] = {z.x, z.y};
    auto del = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    double r4 = r2 * r2;
    return -2.0 * (del(k, l) * x[m] + del(l, m) * x[k] + del(k, m) * x[l]) / r4
           + 8.0 * x[k] * x[l] * x[m] / (r4 * r2);
}

// K^1 = -(1/2pi) f_1 with f index 1 (x_2); K^2 = +(1/2pi) f_0.
inline constexpr double kcoef[2] = {-1.0 / (2.0 * pi), 1.0 / (2.0 * pi)};
inline constexpr int kidx[2] = {1, 0};
// K^perp components: (K^perp)^i = -(1/2pi) f_i.
inline constexpr double kpcoef[2] = {-1.0 / (2.0 * pi), -1.0 / (2.0 * pi)};
inline constexpr int kpidx[2] = {0, 1};

} // namespace detail

/// d_l K^j as Mat2 with entry (l, j): a11 = d1 K^1, a12 = d1 K^2, ...
inline Mat2 grad_biot_savart(Vec2 z) {
    double r2 = norm_sq(z);
    if (r2 == 0) return {};
    Mat2 g;
    g.a11 = detail::kcoef[0] * detail::d1_xk_over_r2(z, detail::kidx[0], 0, r2);
    g.a21 = detail::kcoef[0] * detail::d1_xk_over_r2(z, detail::kidx[0], 1, r2);
    g.a12 = detail::kcoef[1] * detail::d1_xk_over_r2(z, detail::kidx[1], 0, r2);
    g.a22 = detail::kcoef[1] * detail::d1_xk_over_r2(z, detail::kidx[1], 1, r2);
    return g;
}

/// Frobenius norm of grad K; equals sqrt(2)/(2 pi r^2).
inline double grad_biot_savart_frobenius(Vec2 z) {
    double r2 = norm_sq(z);
    if (r2 == 0) return 0;
    return std::sqrt(2.0) / (2.0 * pi * r2);
}

/// The radial scalar kernel grad^perp a_R . K = a'(r/R) / (2 pi R r).
/// It is the curl of a_R K away from the origin (curl K = 0 there), smooth
/// and supported on the transition annulus of the cutoff. Together with the
/// delta contribution a_R(0) = 1 it gives omega(a_R K) = delta + this.
inline double curl_cutoff_kernel(const RadialCutoff& a, double R, Vec2 z) {
    double r = norm(z);
    if (r == 0) return 0;
    double d = a.dprofile(r / R);
    if (d == 0) return 0;
    return d / (2.0 * pi * R * r);
}

/// Hessian (d_l d_m) of the scalar tail field (1 - a_R) K^j or
/// (1 - a_R) (K^perp)^i, assembled by the product rule with all factors
/// analytic. Supported on |z| >= plateau radius of the cutoff; decays like
/// |z|^-3, which makes its L1 norm finite (the D2KK bound).
struct TailHessian {
    RadialCutoff cutoff;
    double scale; ///< cutoff scale (eps or the Serfati cutoff's own scale)
    bool use_k_perp; ///< false: K components; true: K^perp components

    /// Returns H[j] with entries (l, m) = d_l d_m [(1 - a) kern^j](z).
    std::array<Mat2, 2> operator()(Vec2 z) const {
        std::array<Mat2, 2> H{};
        double r2 = norm_sq(z);
        if (r2 == 0) return H;
        double r = std::sqrt(r2);
        double t = r / scale;
        if (t <= cutoff.inner) return H; // (1 - a) == 0 here
        double one_minus_a = 1.0 - cutoff.profile(t);
        RadialCutoff at = cutoff.with_scale(scale);
        Vec2 ga = at.grad_a(z);
        Mat2 ha = at.hess_a(z);

        for (int j = 0; j < 2; ++j) {
            double c = use_k_perp ? detail::kpcoef[j] : detail::kcoef[j];
            int k = use_k_perp ? detail::kpidx[j] : detail::kidx[j];
            double K = c * ((k == 0 ? z.x : z.y) / r2);
            double dK[2] = {c * detail::d1_xk_over_r2(z, k, 0, r2),
                            c * detail::d1_xk_over_r2(z, k, 1, r2)};
            double d2K[2][2];
            for (int l = 0; l < 2; ++l)
                for (int m = 0; m < 2; ++m)
                    d2K[l][m] = c * detail::d2_xk_over_r2(z, k, l, m, r2);
            double ga_[2] = {ga.x, ga.y};
            double ha_[2][2] = {{ha.a11, ha.a12}, {ha.a21, ha.a22}};
            double out[2][2];
            for (int l = 0; l < 2; ++l)
                for (int m = 0; m < 2; ++m)
                    out[l][m] = one_minus_a * d2K[l][m] - ga_[l] * dK[m] - ga_[m] * dK[l]
                                - ha_[l][m] * K;
            H[j] = Mat2{out[0][0], out[0][1], out[1][0], out[1][1]};
        }
        return H;
    }

    /// Frobenius norm over all (j, l, m); rotation invariant, so a function
    /// of |z| only.
    double frobenius(Vec2 z) const {
        auto H = (*this)(z);
        double s = H[0].frobenius(), t = H[1].frobenius();
        return std::sqrt(s * s + t * t);
    }
};

/// Contraction pieces of the Serfati far-field operator.
///
/// The identity's time integrand is sum_lm d_l d^perp_m [(1-a) K^j] * (u^l u^m).
/// With d^perp = (-d_2, d_1) and u (x) u symmetric this collapses, per
/// component j, to
///     A_j * (u2^2 - u1^2) + B_j * (u1 u2),
/// where A_j = d_1 d_2 F_j and B_j = d_1 d_1 F_j - d_2 d_2 F_j for the tail
/// field F_j = (1 - a) K^j. This struct evaluates (A_j, B_j).
struct SerfatiTailKernel {
    TailHessian hess;

    explicit SerfatiTailKernel(const RadialCutoff& a)
        : hess{a, a.scale, /*use_k_perp=*/false} {}

    struct Pieces {
        double A1, B1, A2, B2;
    };

    Pieces operator()(Vec2 z) const {
        auto H = hess(z);
        return {H[0].a12, H[0].a11 - H[0].a22, H[1].a12, H[1].a11 - H[1].a22};
    }
};

/// Contraction pieces of the pressure far-field operator: per output
/// component i the kernel is the plain Hessian of (1 - a_eps) (K^perp)^i,
/// contracted against u (x) u; symmetry gives three pieces (11, 12x2, 22).
struct PressureTailKernel {
    TailHessian hess;

    PressureTailKernel(const RadialCutoff& a, double eps)
        : hess{a, eps, /*use_k_perp=*/true} {}

    std::array<Mat2, 2> operator()(Vec2 z) const { return hess(z); }
};

} // namespace kernel
} // namespace euler2d

#endif

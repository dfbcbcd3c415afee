#ifndef EULER2D_CONVOLVE_HPP
#define EULER2D_CONVOLVE_HPP

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "euler2d/common.hpp"
#include "euler2d/fft.hpp"
#include "euler2d/field.hpp"
#include "euler2d/grid.hpp"

namespace euler2d {

/// Which summation path evaluates kernel convolutions. Both compute the
/// same quadrature sum_y kern(x - y) f(y) h^2 over the grid; the fast path
/// zero-pads to 2N and uses circular FFT convolution, which is exact for
/// lattice differences up to roundoff. Auto picks FFT whenever the grid is
/// a power of two.
enum class ConvMode { Auto, Direct, Fft };

namespace conv {

inline bool use_fft(const Grid& g, ConvMode mode) {
    if (mode == ConvMode::Direct) return false;
    if (mode == ConvMode::Fft) {
        if (!fft::is_pow2(g.n)) throw InvalidArgument("convolve: FFT path needs power-of-two grids");
        return true;
    }
    return fft::is_pow2(g.n) && g.n >= 16;
}

/// Kernel tabulated on the 2N x 2N lattice of node differences and
/// transformed; two real kernels may ride in one complex array (second in
/// the imaginary part), in which case a convolution against a real field
/// yields both results at once.
struct KernelSpectrum {
    int m = 0;
    std::vector<fft::cplx> spec;
};

/// Zero-padded forward transform of a real field (h^2 quadrature weight
/// folded in here).
struct FieldSpectrum {
    int m = 0;
    std::vector<fft::cplx> spec;
};

inline KernelSpectrum tabulate_kernel(const Grid& g,
                                      const std::function<double(Vec2)>& k_re,
                                      const std::function<double(Vec2)>& k_im = nullptr) {
    const int m = 2 * g.n;
    KernelSpectrum ks;
    ks.m = m;
    ks.spec.assign(static_cast<std::size_t>(m) * m, fft::cplx(0));
    const double h = g.spacing;
    for (int dj = -g.n; dj < g.n; ++dj)
        for (int di = -g.n; di < g.n; ++di) {
            Vec2 z{di * h, dj * h};
            double re = k_re(z);
            double im = k_im ? k_im(z) : 0.0;
            if (re == 0.0 && im == 0.0) continue;
            int ii = (di + m) % m;
            int jj = (dj + m) % m;
            ks.spec[static_cast<std::size_t>(jj) * m + ii] = fft::cplx(re, im);
        }
    fft::transform2d(ks.spec, m, false);
    return ks;
}

inline FieldSpectrum forward_field(const ScalarField& f) {
    const int n = f.grid.n, m = 2 * n;
    FieldSpectrum fs;
    fs.m = m;
    fs.spec.assign(static_cast<std::size_t>(m) * m, fft::cplx(0));
    const double w = f.grid.spacing * f.grid.spacing;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            fs.spec[static_cast<std::size_t>(j) * m + i] = fft::cplx(f.at(i, j) * w, 0.0);
    fft::transform2d(fs.spec, m, false);
    return fs;
}

/// accum += kernel_spectrum * field_spectrum (pointwise).
inline void accumulate(std::vector<fft::cplx>& accum, const KernelSpectrum& ks,
                       const FieldSpectrum& fs) {
    if (accum.empty()) accum.assign(ks.spec.size(), fft::cplx(0));
    for (std::size_t i = 0; i < accum.size(); ++i) accum[i] += ks.spec[i] * fs.spec[i];
}

/// Invert an accumulated spectrum and read off the N x N block. For packed
/// kernels the real part is the first component, the imaginary part the
/// second.
inline VectorField inverse_packed(const Grid& g, std::vector<fft::cplx> accum) {
    const int n = g.n, m = 2 * n;
    fft::transform2d(accum, m, true);
    VectorField out(g);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            fft::cplx c = accum[static_cast<std::size_t>(j) * m + i];
            out.at(i, j) = {c.real(), c.imag()};
        }
    return out;
}

inline ScalarField inverse_scalar(const Grid& g, std::vector<fft::cplx> accum) {
    const int n = g.n, m = 2 * n;
    fft::transform2d(accum, m, true);
    ScalarField out(g);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.at(i, j) = accum[static_cast<std::size_t>(j) * m + i].real();
    return out;
}

} // namespace conv

/// (kern * f)(x_i) = sum_j kern(x_i - y_j) f(y_j) h^2 for a scalar kernel.
/// The kernel callable must return its regularized value at z = 0
/// (0 for the antisymmetric singular kernels used here).
inline ScalarField convolve(const ScalarField& f, const std::function<double(Vec2)>& kern,
                            ConvMode mode = ConvMode::Auto) {
    const Grid& g = f.grid;
    if (conv::use_fft(g, mode)) {
        auto ks = conv::tabulate_kernel(g, kern);
        auto fs = conv::forward_field(f);
        std::vector<fft::cplx> acc;
        conv::accumulate(acc, ks, fs);
        return conv::inverse_scalar(g, std::move(acc));
    }
    ScalarField out(g);
    const double w = g.spacing * g.spacing;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            double s = 0;
            for (int jj = 0; jj < g.n; ++jj)
                for (int ii = 0; ii < g.n; ++ii) {
                    double fv = f.at(ii, jj);
                    if (fv == 0.0) continue;
                    s += kern(Vec2{(i - ii) * g.spacing, (j - jj) * g.spacing}) * fv;
                }
            out.at(i, j) = s * w;
        }
    return out;
}

/// Vector-kernel convolution against a scalar field.
inline VectorField convolve(const ScalarField& f, const std::function<Vec2(Vec2)>& kern,
                            ConvMode mode = ConvMode::Auto) {
    const Grid& g = f.grid;
    if (conv::use_fft(g, mode)) {
        auto ks = conv::tabulate_kernel(
            g, [&](Vec2 z) { return kern(z).x; }, [&](Vec2 z) { return kern(z).y; });
        auto fs = conv::forward_field(f);
        std::vector<fft::cplx> acc;
        conv::accumulate(acc, ks, fs);
        return conv::inverse_packed(g, std::move(acc));
    }
    VectorField out(g);
    const double w = g.spacing * g.spacing;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            Vec2 s{};
            for (int jj = 0; jj < g.n; ++jj)
                for (int ii = 0; ii < g.n; ++ii) {
                    double fv = f.at(ii, jj);
                    if (fv == 0.0) continue;
                    s += fv * kern(Vec2{(i - ii) * g.spacing, (j - jj) * g.spacing});
                }
            out.at(i, j) = w * s;
        }
    return out;
}

/// Scalar-kernel convolution applied to both components of a vector field
/// (one packed FFT pass).
inline VectorField convolve_components(const VectorField& f,
                                       const std::function<double(Vec2)>& kern,
                                       ConvMode mode = ConvMode::Auto) {
    const Grid& g = f.grid;
    if (conv::use_fft(g, mode)) {
        auto ks = conv::tabulate_kernel(g, kern);
        const int n = g.n, m = 2 * n;
        std::vector<fft::cplx> packed(static_cast<std::size_t>(m) * m, fft::cplx(0));
        const double w = g.spacing * g.spacing;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                Vec2 u = f.at(i, j);
                packed[static_cast<std::size_t>(j) * m + i] = fft::cplx(u.x * w, u.y * w);
            }
        fft::transform2d(packed, m, false);
        for (std::size_t i = 0; i < packed.size(); ++i) packed[i] *= ks.spec[i];
        return conv::inverse_packed(g, std::move(packed));
    }
    ScalarField c0 = convolve(f.component(0), kern, mode);
    ScalarField c1 = convolve(f.component(1), kern, mode);
    VectorField out(g);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = {c0.v[k], c1.v[k]};
    return out;
}

} // namespace euler2d

#endif

#ifndef EULER2D_FFT_HPP
#define EULER2D_FFT_HPP

#include <complex>
#include <vector>

#include "euler2d/common.hpp"

namespace euler2d {
namespace fft {

using cplx = std::complex<double>;

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 transform. Forward uses exp(-i...), inverse
/// exp(+i...) with the 1/n factor applied. Deterministic for a fixed size.
inline void transform(cplx* a, int n, bool inverse) {
    if (!is_pow2(n)) throw InvalidArgument("fft: size must be a power of two");
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * pi / len * (inverse ? 1.0 : -1.0);
        cplx wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cplx w(1.0);
            for (int k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        double s = 1.0 / n;
        for (int i = 0; i < n; ++i) a[i] *= s;
    }
}

/// 2D transform of an m x m row-major array.
inline void transform2d(std::vector<cplx>& a, int m, bool inverse) {
    if (static_cast<int>(a.size()) != m * m)
        throw InvalidArgument("fft: array size does not match grid");
    for (int row = 0; row < m; ++row) transform(a.data() + static_cast<std::size_t>(row) * m, m, inverse);
    std::vector<cplx> col(m);
    for (int c = 0; c < m; ++c) {
        for (int r = 0; r < m; ++r) col[r] = a[static_cast<std::size_t>(r) * m + c];
        transform(col.data(), m, inverse);
        for (int r = 0; r < m; ++r) a[static_cast<std::size_t>(r) * m + c] = col[r];
    }
}

} // namespace fft
} // namespace euler2d

#endif

#ifndef DPW_FFT_HPP
#define DPW_FFT_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>

#include "error.hpp"

namespace dpw {

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

/// In-place iterative radix-2 DFT: x_k <- sum_j x_j exp(sign * 2 pi i jk / m), no scaling.
inline void fft_inplace(std::span<std::complex<double>> x, int sign) {
    const std::size_t m = x.size();
    if (!is_power_of_two(m)) throw GridError("FFT length must be a power of two");
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const double ang = sign * 2.0 * 3.14159265358979323846 / static_cast<double>(len);
        for (std::size_t i = 0; i < m; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Twiddles are evaluated directly rather than by recurrence to keep
                // round-off at machine precision for m up to a few thousand.
                const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
                const auto u = x[i + k];
                const auto v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
            }
        }
    }
}

} // namespace dpw

#endif // DPW_FFT_HPP

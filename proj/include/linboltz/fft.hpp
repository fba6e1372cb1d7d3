#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace linboltz {

// In-place radix-2 FFT, enough for the periodic spectral-shift test mode.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                           (inverse ? 1.0 : -1.0);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= s;
    }
}

// Periodic shift of real samples by a real displacement (in units of the grid
// spacing times index, i.e. shift is in physical units, h is the spacing).
// Implemented as multiplication by e^{-i k shift} in Fourier space; this is an
// exact isometry of the discrete l2 norm.
inline void spectral_shift_periodic(std::vector<double>& f, double shift, double h) {
    const std::size_t n = f.size();
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = f[i];
    fft_radix2(a, false);
    const double L = h * static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (n % 2 == 0 && k == n / 2) {
            // the Nyquist mode must stay real; rounding its phase factor to
            // +-1 keeps the map an exact isometry on real fields
            const double phase = -std::numbers::pi * shift / h;
            a[k] *= std::cos(phase) >= 0.0 ? 1.0 : -1.0;
            continue;
        }
        // signed wavenumber index
        const double m = (k <= n / 2) ? static_cast<double>(k)
                                      : static_cast<double>(k) - static_cast<double>(n);
        const double phase = -2.0 * std::numbers::pi * m * shift / L;
        a[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    fft_radix2(a, true);
    for (std::size_t i = 0; i < n; ++i) f[i] = a[i].real();
}

}  // namespace linboltz

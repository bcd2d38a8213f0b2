// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "tact/errors.hpp"

namespace tact {

namespace {

using Complex = std::complex<double>;

bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// In-place iterative radix-2 Cooley-Tukey; size must be a power of two.
void fft_pow2(std::vector<Complex>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const Complex w_len(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= w_len;
            }
        }
    }
}

// Direct O(N^2) transform for the odd window lengths.
std::vector<Complex> dft_direct(const std::vector<Complex>& x) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double ang =
                -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(i) /
                static_cast<double>(n);
            acc += x[i] * Complex(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

double taper_weight(Taper taper, std::size_t i, std::size_t n) {
    if (taper == Taper::kRectangular) {
        return 1.0;
    }
    // Symmetric Hann window.
    const double phase =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1);
    return 0.5 * (1.0 - std::cos(phase));
}

}  // namespace

AccelWindow::AccelWindow(std::size_t capacity, double sample_rate_hz)
    : sample_rate_hz_(sample_rate_hz) {
    if (capacity < 8) {
        throw ValidationError("accel window capacity must be at least 8");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("accel window sample rate must be positive");
    }
    buf_.resize(capacity, 0.0);
}

void AccelWindow::push(double acc_z) {
    if (!std::isfinite(acc_z)) {
        throw SignalError("non-finite acceleration sample rejected");
    }
    buf_[head_] = acc_z;
    head_ = (head_ + 1) % buf_.size();
    if (fill_ < buf_.size()) {
        ++fill_;
    }
}

std::vector<double> AccelWindow::ordered() const {
    std::vector<double> out;
    out.reserve(fill_);
    // Oldest element sits at head_ once the buffer wrapped, else at 0.
    const std::size_t start = (fill_ == buf_.size()) ? head_ : 0;
    for (std::size_t i = 0; i < fill_; ++i) {
        out.push_back(buf_[(start + i) % buf_.size()]);
    }
    return out;
}

void AccelWindow::clear() {
    head_ = 0;
    fill_ = 0;
}

PowerSpectrum power_spectrum(const AccelWindow& window, Taper taper) {
    if (!window.full()) {
        throw InsufficientDataError("accel window not yet full: " + std::to_string(window.size()) +
                                    "/" + std::to_string(window.capacity()) + " samples");
    }
    return power_spectrum(window.ordered(), window.sample_rate_hz(), taper);
}

PowerSpectrum power_spectrum(const std::vector<double>& samples, double sample_rate_hz,
                             Taper taper) {
    const std::size_t n = samples.size();
    if (n < 2) {
        throw InsufficientDataError("spectrum needs at least two samples");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("sample rate must be positive");
    }

    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = Complex(samples[i] * taper_weight(taper, i, n), 0.0);
    }
    if (is_pow2(n)) {
        fft_pow2(x);
    } else {
        x = dft_direct(x);
    }

    PowerSpectrum spec;
    const std::size_t n_bins = n / 2 + 1;
    spec.bins.resize(n_bins);
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k < n_bins; ++k) {
        // Bin 0 and (for even N) the Nyquist bin have no mirror partner.
        const bool paired = k != 0 && 2 * k != n;
        spec.bins[k] = (paired ? 2.0 : 1.0) * std::norm(x[k]) * scale;
    }
    spec.bin_width_hz = sample_rate_hz / static_cast<double>(n);
    double total = 0.0;
    for (double b : spec.bins) {
        total += b;
    }
    spec.total_power = total;
    return spec;
}

double median_frequency(const PowerSpectrum& spec) {
    double total = 0.0;
    for (double b : spec.bins) {
        total += b;
    }
    if (!(total > 0.0)) {
        throw DegenerateSpectrumError("median frequency of a zero-power spectrum is undefined");
    }
    const double half = 0.5 * total;
    double cum = 0.0;
    for (std::size_t k = 0; k < spec.bins.size(); ++k) {
        const double b = spec.bins[k];
        if (cum + b >= half) {
            const double remaining = half - cum;
            if (remaining <= 0.0) {
                return static_cast<double>(k) - 0.5;
            }
            return static_cast<double>(k) - 0.5 + remaining / b;
        }
        cum += b;
    }
    // Rounding pushed the half-mass point past the last bin.
    return static_cast<double>(spec.bins.size() - 1) + 0.5;
}

}  // namespace tact

// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "tact/config.hpp"

namespace tact {

/// Fixed-capacity ring buffer over the most recent vertical acceleration
/// samples (m/s^2, world-frame z projection). Capacity is fixed at
/// construction; pushing into a full window evicts the oldest sample.
///
/// Single-writer; instances are independent and may be moved between
/// threads.
class AccelWindow {
public:
    /// capacity must be >= 8, sample_rate_hz > 0; throws ValidationError.
    AccelWindow(std::size_t capacity, double sample_rate_hz);

    /// Appends one sample. Throws SignalError on non-finite input, leaving
    /// the window unchanged.
    void push(double acc_z);

    bool full() const { return fill_ == buf_.size(); }
    std::size_t size() const { return fill_; }
    std::size_t capacity() const { return buf_.size(); }
    double sample_rate_hz() const { return sample_rate_hz_; }

    /// Copy of the current contents, oldest to newest.
    std::vector<double> ordered() const;

    void clear();

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;  // next write slot
    std::size_t fill_ = 0;
    double sample_rate_hz_;
};

/// One-sided power spectrum of an N-sample window, bins 0..floor(N/2).
/// Bins are scaled so that their sum equals the mean square of the tapered
/// signal (sum(bins) * N == ||x||^2 for the rectangular taper); energy of
/// the conjugate-symmetric negative frequencies is folded into the
/// positive bins.
struct PowerSpectrum {
    std::vector<double> bins;
    double bin_width_hz = 0.0;
    double total_power = 0.0;
};

/// Spectrum of a full window. Throws InsufficientDataError while the
/// window is not yet full. Pure and reentrant.
PowerSpectrum power_spectrum(const AccelWindow& window, Taper taper = Taper::kRectangular);

/// Spectrum of an arbitrary sample vector (at least two samples).
PowerSpectrum power_spectrum(const std::vector<double>& samples, double sample_rate_hz,
                             Taper taper = Taper::kRectangular);

/// Median frequency in fractional bin-index units: the point splitting the
/// spectral energy into two equal halves, treating bin k as a unit-width
/// mass centred on index k and interpolating linearly inside the crossing
/// bin. A flat spectrum over K bins yields (K - 1) / 2.
///
/// Throws DegenerateSpectrumError when the total power is zero.
double median_frequency(const PowerSpectrum& spec);

}  // namespace tact

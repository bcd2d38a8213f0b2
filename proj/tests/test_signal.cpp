// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "tact/errors.hpp"
#include "tact/signal.hpp"

using namespace tact;

namespace {

// Direct O(N^2) discrete Fourier sum, folded one-sided with the same
// mean-square normalization; independent of the FFT path under test.
std::vector<double> naive_spectrum(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> bins(n / 2 + 1);
    for (std::size_t k = 0; k < bins.size(); ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(i) / static_cast<double>(n);
            re += x[i] * std::cos(ang);
            im -= x[i] * std::sin(ang);
        }
        const double power = (re * re + im * im) / (static_cast<double>(n) * static_cast<double>(n));
        const bool paired = k != 0 && 2 * k != n;
        bins[k] = (paired ? 2.0 : 1.0) * power;
    }
    return bins;
}

// Mass of the spectrum below point m, with bin k spread uniformly over
// [k - 0.5, k + 0.5]. Bisection on this is the median oracle.
double mass_below(const std::vector<double>& bins, double m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const double lo = static_cast<double>(k) - 0.5;
        const double frac = std::clamp(m - lo, 0.0, 1.0);
        acc += bins[k] * frac;
    }
    return acc;
}

double median_by_bisection(const std::vector<double>& bins) {
    double total = 0.0;
    for (double b : bins) {
        total += b;
    }
    double lo = -0.5;
    double hi = static_cast<double>(bins.size() - 1) + 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mass_below(bins, mid) < 0.5 * total) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

AccelWindow window_of(const std::vector<double>& samples, double rate = 200.0) {
    AccelWindow w(samples.size(), rate);
    for (double s : samples) {
        w.push(s);
    }
    return w;
}

}  // namespace

TEST_CASE("accel window push and eviction") {
    AccelWindow w(8, 200.0);
    CHECK(w.capacity() == 8);
    CHECK(w.size() == 0);
    CHECK_FALSE(w.full());

    w.push(1.0);
    CHECK(w.size() == 1);
    CHECK(w.ordered() == std::vector<double>{1.0});

    for (int i = 2; i <= 8; ++i) {
        w.push(static_cast<double>(i));
    }
    CHECK(w.full());
    CHECK(w.ordered() == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});

    w.push(9.0);
    CHECK(w.size() == 8);
    CHECK(w.ordered() == std::vector<double>{2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("accel window rejects bad input and construction") {
    AccelWindow w(8, 200.0);
    w.push(0.5);
    CHECK_THROWS_AS(w.push(std::nan("")), SignalError);
    CHECK_THROWS_AS(w.push(std::numeric_limits<double>::infinity()), SignalError);
    CHECK(w.size() == 1);  // failed pushes leave the window alone
    CHECK_THROWS_AS(AccelWindow(4, 200.0), ValidationError);
    CHECK_THROWS_AS(AccelWindow(16, 0.0), ValidationError);
}

TEST_CASE("spectrum of a constant signal is pure DC") {
    const double c = 3.25;
    const AccelWindow w = window_of(std::vector<double>(16, c));
    const PowerSpectrum spec = power_spectrum(w);
    REQUIRE(spec.bins.size() == 9);
    CHECK(spec.bins[0] == doctest::Approx(c * c).epsilon(1e-12));
    for (std::size_t k = 1; k < spec.bins.size(); ++k) {
        CHECK(std::abs(spec.bins[k]) < 1e-12);
    }
    CHECK(spec.bin_width_hz == doctest::Approx(200.0 / 16.0));
}

TEST_CASE("spectrum of a bin-k sinusoid concentrates in bin k") {
    const std::size_t n = 32;
    const std::size_t k = 5;
    const double amp = 2.0;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = amp * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) *
                              static_cast<double>(i) / static_cast<double>(n));
    }
    const PowerSpectrum spec = power_spectrum(window_of(x));
    CHECK(spec.bins[k] == doctest::Approx(amp * amp / 2.0).epsilon(1e-9));
    for (std::size_t j = 0; j < spec.bins.size(); ++j) {
        if (j != k) {
            CHECK(std::abs(spec.bins[j]) < 1e-12);
        }
    }
}

TEST_CASE("spectrum matches the naive DFT oracle") {
    std::mt19937 rng(42);
    std::normal_distribution<double> dist(0.0, 3.0);
    for (std::size_t n : {8u, 16u, 32u, 64u, 20u}) {  // 20 exercises the non-pow2 path
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> x(n);
            for (double& v : x) {
                v = dist(rng);
            }
            const PowerSpectrum spec = power_spectrum(x, 200.0);
            const std::vector<double> oracle = naive_spectrum(x);
            REQUIRE(spec.bins.size() == oracle.size());
            for (std::size_t kk = 0; kk < oracle.size(); ++kk) {
                CHECK(std::abs(spec.bins[kk] - oracle[kk]) <=
                      1e-9 * std::max(1.0, spec.total_power));
            }
        }
    }
}

TEST_CASE("Parseval: bin sum times N equals the squared norm") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(64);
        double norm2 = 0.0;
        for (double& v : x) {
            v = dist(rng);
            norm2 += v * v;
        }
        const PowerSpectrum spec = power_spectrum(x, 200.0, Taper::kRectangular);
        CHECK(spec.total_power * 64.0 == doctest::Approx(norm2).epsilon(1e-6));
        for (double b : spec.bins) {
            CHECK(b >= 0.0);
        }
    }
}

TEST_CASE("hann taper damps spectral leakage of an off-bin tone") {
    const std::size_t n = 64;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::sin(2.0 * std::numbers::pi * 5.37 * static_cast<double>(i) /
                        static_cast<double>(n));
    }
    const PowerSpectrum rect = power_spectrum(x, 200.0, Taper::kRectangular);
    const PowerSpectrum hann = power_spectrum(x, 200.0, Taper::kHann);
    // Far-from-tone leakage should drop by orders of magnitude.
    CHECK(hann.bins[25] < 1e-3 * rect.bins[25]);
}

TEST_CASE("spectrum requires a full window") {
    AccelWindow w(16, 200.0);
    for (int i = 0; i < 10; ++i) {
        w.push(1.0);
    }
    CHECK_THROWS_AS(power_spectrum(w), InsufficientDataError);
}

TEST_CASE("median frequency of simple spectra") {
    PowerSpectrum flat;
    flat.bins = {1.0, 1.0, 1.0, 1.0};
    flat.total_power = 4.0;
    CHECK(median_frequency(flat) == doctest::Approx(1.5).epsilon(1e-12));

    PowerSpectrum dc;
    dc.bins = {4.0, 0.0, 0.0, 0.0};
    dc.total_power = 4.0;
    CHECK(std::abs(median_frequency(dc)) < 1e-12);

    PowerSpectrum zero;
    zero.bins = {0.0, 0.0};
    zero.total_power = 0.0;
    CHECK_THROWS_AS(median_frequency(zero), DegenerateSpectrumError);
}

TEST_CASE("median frequency matches the cumulative-sum bisection oracle") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        PowerSpectrum spec;
        spec.bins.resize(33);
        for (double& b : spec.bins) {
            b = dist(rng);
        }
        for (double b : spec.bins) {
            spec.total_power += b;
        }
        const double med = median_frequency(spec);
        const double oracle = median_by_bisection(spec.bins);
        CHECK(med == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("median frequency is scale invariant") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    PowerSpectrum spec;
    spec.bins.resize(17);
    for (double& b : spec.bins) {
        b = dist(rng);
        spec.total_power += b;
    }
    const double med = median_frequency(spec);
    for (double lambda : {1e-6, 0.5, 3.0, 1e9}) {
        PowerSpectrum scaled;
        scaled.bins = spec.bins;
        for (double& b : scaled.bins) {
            b *= lambda;
        }
        scaled.total_power = spec.total_power * lambda;
        CHECK(median_frequency(scaled) == doctest::Approx(med).epsilon(1e-12));
    }
}

TEST_CASE("median frequency is monotone under low-to-high mass shifts") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> bins(17);
        for (double& b : bins) {
            b = dist(rng) + 0.01;
        }
        PowerSpectrum spec;
        spec.bins = bins;
        for (double b : bins) {
            spec.total_power += b;
        }
        const double before = median_frequency(spec);

        std::uniform_int_distribution<std::size_t> pick(0, bins.size() - 1);
        std::size_t lo = pick(rng);
        std::size_t hi = pick(rng);
        if (lo > hi) {
            std::swap(lo, hi);
        }
        const double moved = bins[lo] * dist(rng);
        PowerSpectrum shifted;
        shifted.bins = bins;
        shifted.bins[lo] -= moved;
        shifted.bins[hi] += moved;
        for (double b : shifted.bins) {
            shifted.total_power += b;
        }
        CHECK(median_frequency(shifted) >= before - 1e-12);
    }
}

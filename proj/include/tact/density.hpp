// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace tact {

/// Absolute knee/wheel torque pair fed to the measurement model.
/// Components are magnitudes: finite and >= 0.
struct TorqueSample {
    double tau_knee = 0.0;   ///< Nm
    double tau_wheel = 0.0;  ///< Nm
};

/// Throws SignalError if a component is negative or non-finite.
void validate(const TorqueSample& m);

enum class ContactLabel : std::uint8_t { kContact, kNoContact };
const char* contact_label_name(ContactLabel s);

struct KdeFitOptions {
    std::size_t grid_resolution = 200;
    /// Skips Scott's rule when set; required for data that is degenerate on
    /// every axis (e.g. one point duplicated n times).
    std::optional<double> bandwidth_override;
    /// Lower bound on returned densities, 1/Nm^2. Keeps a single
    /// out-of-distribution measurement from zeroing the posterior.
    double density_floor = 1e-12;
    /// Grid bounds pad beyond the data bounding box, in bandwidths.
    double margin_bandwidths = 3.0;
};

/// Scott's rule-of-thumb bandwidth: n^(-1/(d+4)) times the geometric mean
/// of the marginal standard deviations (isotropic scalar bandwidth).
///
/// Preconditions: n >= 2, d >= 1 with one stddev per axis, all positive.
/// Violations raise DegenerateDataError (sample count / zero variance) or
/// ValidationError (dimension mismatch).
double scott_bandwidth(std::size_t n, std::size_t dims, const std::vector<double>& marginal_stddevs);

/// Gaussian kernel density estimate over torque pairs, served through a
/// precomputed log-density lookup grid with bilinear interpolation.
///
/// The grid stores log densities and interpolation happens in log space:
/// kernel tails decay as exp(-r^2 / 2h^2), and linear-space interpolation
/// would be off by more than the tail values themselves a few bandwidths
/// out. Queries outside the grid are clamped to the boundary; results are
/// floored at the density floor and never zero or non-finite.
///
/// Immutable after fit; safe for concurrent read-only queries.
class KdeModel {
public:
    /// Fits a KDE to at least two finite samples. The bandwidth follows
    /// Scott's rule over the axes with positive variance unless
    /// opts.bandwidth_override is set; data degenerate on every axis and
    /// without an override raises DegenerateDataError naming the axes.
    static KdeModel fit(const std::vector<TorqueSample>& points, ContactLabel state,
                        const KdeFitOptions& opts = {});

    /// Rebuilds a model from serialized parts, validating invariants.
    static KdeModel from_parts(ContactLabel state, double bandwidth, std::size_t sample_count,
                               std::array<double, 2> min_bounds, std::array<double, 2> max_bounds,
                               std::size_t resolution, std::vector<double> log_grid,
                               double density_floor);

    /// Probability density at m, 1/Nm^2. Total over finite inputs.
    double likelihood(const TorqueSample& m) const;
    double log_likelihood(const TorqueSample& m) const;

    ContactLabel state() const { return state_; }
    double bandwidth() const { return bandwidth_; }
    std::size_t sample_count() const { return sample_count_; }
    std::size_t resolution() const { return resolution_; }
    double density_floor() const { return density_floor_; }
    /// axis 0 = knee, axis 1 = wheel
    std::array<double, 2> min_bounds() const { return min_; }
    std::array<double, 2> max_bounds() const { return max_; }
    /// Row-major log densities, knee index major: grid[i_knee * res + j_wheel].
    const std::vector<double>& log_grid() const { return log_grid_; }

    /// Trapezoid integral of exp(log grid) over the grid region. The fit
    /// margin keeps this close to one (Gaussian tails may leave the box).
    double grid_mass() const;

private:
    KdeModel() = default;

    ContactLabel state_ = ContactLabel::kContact;
    double bandwidth_ = 0.0;
    std::size_t sample_count_ = 0;
    std::array<double, 2> min_{0.0, 0.0};
    std::array<double, 2> max_{0.0, 0.0};
    std::size_t resolution_ = 0;
    std::vector<double> log_grid_;
    double density_floor_ = 1e-12;
};

}  // namespace tact

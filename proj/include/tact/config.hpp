// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace tact {

enum class Taper : std::uint8_t { kRectangular, kHann };
enum class LegMode : std::uint8_t { kMean, kLeft, kRight };
enum class SwitchFeature : std::uint8_t { kTotalPower, kMaxBin };

struct SigmoidParams {
    double offset = 0.0;
    double slope = 1.0;
};

/// Flat initial belief assigned to both contact states.
inline constexpr double kFlatPrior = 0.5;

/// Belief components are kept inside [kBeliefClamp, 1 - kBeliefClamp] before
/// each prediction step; with the product-form transition matrix an exactly
/// zero component would otherwise be absorbing.
inline constexpr double kBeliefClamp = 1e-9;

/// Runtime parameters of the contact estimator.
///
/// window_length, sample_rate_hz and the sigmoid parameters must match
/// between fitting and filtering, which is why fitted model files embed a
/// snapshot of this struct and `tact run` warns when the hashes drift.
struct EstimatorConfig {
    SigmoidParams switch_sigmoid{8.0, 1.0};     ///< on window spectral power
    SigmoidParams direction_sigmoid{7.5, 2.5};  ///< on median frequency (bin units)
    double decision_threshold = 0.8;            ///< P(contact) >= threshold -> contact
    std::size_t window_length = 64;             ///< accel window size N
    double sample_rate_hz = 200.0;
    LegMode leg_mode = LegMode::kMean;
    double density_floor = 1e-12;  ///< likelihood lower bound, 1/Nm^2
    Taper taper = Taper::kRectangular;
    std::size_t grid_resolution = 200;  ///< KDE lookup grid nodes per axis
    SwitchFeature switch_feature = SwitchFeature::kTotalPower;

    /// Throws ValidationError on out-of-range values.
    void validate() const;
};

std::string to_json_string(const EstimatorConfig& cfg);
EstimatorConfig estimator_config_from_json(const std::string& text);

/// Reads a JSON config file; missing keys keep their default values.
EstimatorConfig load_estimator_config(const std::string& path);

/// FNV-1a over the canonical JSON form; stable across runs and platforms.
std::uint64_t config_hash(const EstimatorConfig& cfg);

const char* taper_name(Taper t);
const char* leg_mode_name(LegMode m);
const char* switch_feature_name(SwitchFeature f);

}  // namespace tact

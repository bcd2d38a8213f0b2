// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tact/density.hpp"

namespace tact {

/// One mode of the diagonal-covariance Gaussian mixture emitting torques.
struct TorqueMode {
    double mean_knee = 0.0;  ///< Nm
    double mean_wheel = 0.0;
    double std_knee = 1.0;
    double std_wheel = 1.0;
    double weight = 1.0;
};

/// Parameters of the synthetic drop scenario: repeated rolling / falling /
/// stabilization cycles with configurable emissions and sensor noise.
///
/// Acceleration convention: the generated acc_z channel is the
/// gravity-compensated world-frame vertical acceleration, zero-mean during
/// steady phases. Steady contact carries only the vibration term; falls
/// sit on the freefall_accel plateau (zero by default); takeoff inserts a
/// smooth low-frequency bump and landing a sharp impact spike, which is
/// where the spectral transition cues come from.
struct ScenarioConfig {
    double sample_rate_hz = 200.0;
    double roll_duration_s = 3.0;
    double fall_duration_s = 0.35;
    double stabilization_duration_s = 3.0;
    std::size_t drops = 1;

    std::vector<TorqueMode> contact_torques;  ///< default: two modes around (10, 3) Nm
    TorqueMode no_contact_torques{0.0, 0.0, 1.0, 0.5, 1.0};
    /// Time constant of the motor torque transient after contact loss. The
    /// knee keeps carrying a decaying residue of its pre-takeoff load,
    /// which is what makes takeoffs slower to detect than landings.
    double takeoff_torque_decay_s = 0.02;

    double contact_vibration_std = 0.5;    ///< m/s^2, part of the clean signal
    double takeoff_bump_amplitude = -8.0;  ///< m/s^2, half-cosine at fall start
    double takeoff_bump_width_s = 0.10;
    double landing_impulse_amplitude = 40.0;  ///< m/s^2, rectangular impact spike
    double landing_impulse_width_s = 0.01;
    double freefall_accel = 0.0;  ///< plateau during falls

    double noise_std_knee = 0.0;  ///< Nm, zero-mean Gaussian, added last
    double noise_std_wheel = 0.0;
    double noise_std_acc = 0.0;  ///< m/s^2

    std::size_t fit_samples_per_state = 2000;
    std::uint64_t seed = 1;

    ScenarioConfig();

    /// Throws ValidationError with the offending field named.
    void validate() const;

    /// Mixture mean of the contact torque emission, for sanity checks.
    TorqueSample contact_torque_mean() const;

    std::size_t steps_per_drop() const;
};

std::string to_json_string(const ScenarioConfig& cfg);
ScenarioConfig scenario_config_from_json(const std::string& text);
ScenarioConfig load_scenario_config(const std::string& path);

enum class EventKind : std::uint8_t { kTakeoff, kLanding };
const char* event_kind_name(EventKind k);

struct TransitionEvent {
    double time_s = 0.0;
    EventKind kind = EventKind::kTakeoff;
};

struct TraceStep {
    double time_s = 0.0;
    double tau_knee = 0.0;  ///< Nm, signed as emitted
    double tau_wheel = 0.0;
    double acc_z = 0.0;  ///< m/s^2
    bool contact = true;
};

/// Ground-truth labelled synthetic trace. Timestamps are uniformly spaced
/// at 1/sample_rate; events alternate takeoff/landing and coincide with
/// the label flips.
struct LabeledTrace {
    double sample_rate_hz = 0.0;
    std::vector<TraceStep> steps;
    std::vector<TransitionEvent> events;
};

/// Deterministic given the seed. Measurement noise comes from an RNG
/// stream separate from the emissions, so traces that differ only in noise
/// levels share the same clean signal.
LabeledTrace generate_trace(const ScenarioConfig& config);

struct FitDataset {
    std::vector<TorqueSample> contact;
    std::vector<TorqueSample> no_contact;
};

/// Per-state torque pools drawn from the emission distributions, absolute
/// values applied; ready for KdeModel::fit.
FitDataset generate_fit_dataset(const ScenarioConfig& config);

}  // namespace tact

// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tact/errors.hpp"

namespace tact {

namespace {

using nlohmann::json;

constexpr std::uint64_t kNoiseStreamSalt = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kFitStreamSalt = 0x51ed270b9f2a4d01ull;

std::size_t duration_to_steps(double seconds, double rate) {
    return static_cast<std::size_t>(std::llround(seconds * rate));
}

struct TorquePair {
    double knee;
    double wheel;
};

class EmissionSampler {
public:
    explicit EmissionSampler(const ScenarioConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), engine_(seed) {
        double total = 0.0;
        for (const TorqueMode& m : cfg.contact_torques) {
            total += m.weight;
            cumulative_weights_.push_back(total);
        }
        total_weight_ = total;
    }

    TorquePair contact_torque() {
        const double pick = uniform_(engine_) * total_weight_;
        std::size_t idx = 0;
        while (idx + 1 < cumulative_weights_.size() && pick > cumulative_weights_[idx]) {
            ++idx;
        }
        const TorqueMode& m = cfg_.contact_torques[idx];
        return {m.mean_knee + m.std_knee * normal_(engine_),
                m.mean_wheel + m.std_wheel * normal_(engine_)};
    }

    TorquePair no_contact_torque() {
        // Burn a uniform so the stream layout matches contact steps.
        uniform_(engine_);
        const TorqueMode& m = cfg_.no_contact_torques;
        return {m.mean_knee + m.std_knee * normal_(engine_),
                m.mean_wheel + m.std_wheel * normal_(engine_)};
    }

    double vibration() { return cfg_.contact_vibration_std * normal_(engine_); }

private:
    const ScenarioConfig& cfg_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::vector<double> cumulative_weights_;
    double total_weight_ = 0.0;
};

}  // namespace

ScenarioConfig::ScenarioConfig()
    : contact_torques{{8.5, 2.5, 2.0, 1.0, 0.5}, {11.5, 3.5, 2.0, 1.0, 0.5}} {}

void ScenarioConfig::validate() const {
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("scenario: sample_rate_hz must be positive");
    }
    if (!(roll_duration_s > 0.0) || !(fall_duration_s > 0.0) ||
        !(stabilization_duration_s > 0.0)) {
        throw ValidationError("scenario: phase durations must be positive");
    }
    if (drops == 0) {
        throw ValidationError("scenario: drops must be at least 1");
    }
    if (contact_torques.empty()) {
        throw ValidationError("scenario: contact torque mixture needs at least one mode");
    }
    for (const TorqueMode& m : contact_torques) {
        if (!(m.std_knee >= 0.0) || !(m.std_wheel >= 0.0) || !(m.weight > 0.0)) {
            throw ValidationError("scenario: contact torque mode has invalid spread or weight");
        }
    }
    if (!(no_contact_torques.std_knee >= 0.0) || !(no_contact_torques.std_wheel >= 0.0)) {
        throw ValidationError("scenario: no-contact torque spreads must be non-negative");
    }
    if (!(takeoff_torque_decay_s > 0.0)) {
        throw ValidationError("scenario: takeoff_torque_decay_s must be positive");
    }
    if (!(contact_vibration_std >= 0.0)) {
        throw ValidationError("scenario: contact_vibration_std must be non-negative");
    }
    if (!(takeoff_bump_width_s >= 0.0) || !(landing_impulse_width_s >= 0.0)) {
        throw ValidationError("scenario: transition signature widths must be non-negative");
    }
    if (!(noise_std_knee >= 0.0) || !(noise_std_wheel >= 0.0) || !(noise_std_acc >= 0.0)) {
        throw ValidationError("scenario: noise stddevs must be non-negative");
    }
    if (fit_samples_per_state < 2) {
        throw ValidationError("scenario: fit_samples_per_state must be at least 2");
    }
}

TorqueSample ScenarioConfig::contact_torque_mean() const {
    double total = 0.0;
    double knee = 0.0;
    double wheel = 0.0;
    for (const TorqueMode& m : contact_torques) {
        total += m.weight;
        knee += m.weight * m.mean_knee;
        wheel += m.weight * m.mean_wheel;
    }
    return {knee / total, wheel / total};
}

std::size_t ScenarioConfig::steps_per_drop() const {
    return duration_to_steps(roll_duration_s, sample_rate_hz) +
           duration_to_steps(fall_duration_s, sample_rate_hz) +
           duration_to_steps(stabilization_duration_s, sample_rate_hz);
}

const char* event_kind_name(EventKind k) {
    return k == EventKind::kTakeoff ? "takeoff" : "landing";
}

LabeledTrace generate_trace(const ScenarioConfig& config) {
    config.validate();

    const double rate = config.sample_rate_hz;
    const double dt = 1.0 / rate;
    const std::size_t roll_n = duration_to_steps(config.roll_duration_s, rate);
    const std::size_t fall_n = duration_to_steps(config.fall_duration_s, rate);
    const std::size_t stab_n = duration_to_steps(config.stabilization_duration_s, rate);
    const std::size_t bump_n =
        std::min(duration_to_steps(config.takeoff_bump_width_s, rate), fall_n);
    const std::size_t impulse_n =
        std::min(duration_to_steps(config.landing_impulse_width_s, rate), stab_n);
    if (roll_n == 0 || fall_n == 0 || stab_n == 0) {
        throw ValidationError("scenario: phase durations shorter than one sample");
    }

    EmissionSampler emission(config, config.seed);
    std::mt19937_64 noise_engine(config.seed ^ kNoiseStreamSalt);
    std::normal_distribution<double> unit_noise;

    LabeledTrace trace;
    trace.sample_rate_hz = rate;
    trace.steps.reserve(config.drops * (roll_n + fall_n + stab_n));

    std::size_t index = 0;
    TorquePair takeoff_residue{0.0, 0.0};

    const auto emit = [&](bool contact, double clean_knee, double clean_wheel, double clean_acc) {
        TraceStep step;
        step.time_s = static_cast<double>(index) * dt;
        // Noise draws happen for every channel on every step so that the
        // noise stream stays aligned across configs that differ only in
        // the noise levels.
        step.tau_knee = clean_knee + config.noise_std_knee * unit_noise(noise_engine);
        step.tau_wheel = clean_wheel + config.noise_std_wheel * unit_noise(noise_engine);
        step.acc_z = clean_acc + config.noise_std_acc * unit_noise(noise_engine);
        step.contact = contact;
        trace.steps.push_back(step);
        ++index;
    };

    for (std::size_t drop = 0; drop < config.drops; ++drop) {
        TorquePair last_contact{0.0, 0.0};
        for (std::size_t s = 0; s < roll_n; ++s) {
            last_contact = emission.contact_torque();
            emit(true, last_contact.knee, last_contact.wheel, emission.vibration());
        }

        trace.events.push_back({static_cast<double>(index) * dt, EventKind::kTakeoff});
        takeoff_residue = last_contact;
        for (std::size_t s = 0; s < fall_n; ++s) {
            const TorquePair jitter = emission.no_contact_torque();
            const double vib = emission.vibration();  // burn for stream alignment
            (void)vib;
            const double decay = std::exp(-(static_cast<double>(s) + 1.0) * dt /
                                          config.takeoff_torque_decay_s);
            double acc = config.freefall_accel;
            if (s < bump_n) {
                const double phase = std::numbers::pi * (static_cast<double>(s) + 0.5) /
                                     static_cast<double>(bump_n);
                acc += config.takeoff_bump_amplitude * std::sin(phase) * std::sin(phase);
            }
            emit(false, jitter.knee + takeoff_residue.knee * decay,
                 jitter.wheel + takeoff_residue.wheel * decay, acc);
        }

        trace.events.push_back({static_cast<double>(index) * dt, EventKind::kLanding});
        for (std::size_t s = 0; s < stab_n; ++s) {
            const TorquePair torque = emission.contact_torque();
            double acc = emission.vibration();
            if (s < impulse_n) {
                acc += config.landing_impulse_amplitude;
            }
            emit(true, torque.knee, torque.wheel, acc);
        }
    }
    return trace;
}

FitDataset generate_fit_dataset(const ScenarioConfig& config) {
    config.validate();
    EmissionSampler emission(config, config.seed ^ kFitStreamSalt);
    FitDataset out;
    out.contact.reserve(config.fit_samples_per_state);
    out.no_contact.reserve(config.fit_samples_per_state);
    for (std::size_t i = 0; i < config.fit_samples_per_state; ++i) {
        const TorquePair c = emission.contact_torque();
        out.contact.push_back({std::abs(c.knee), std::abs(c.wheel)});
        const TorquePair n = emission.no_contact_torque();
        out.no_contact.push_back({std::abs(n.knee), std::abs(n.wheel)});
    }
    return out;
}

namespace {

json mode_to_json(const TorqueMode& m) {
    return json{{"mean_knee", m.mean_knee},
                {"mean_wheel", m.mean_wheel},
                {"std_knee", m.std_knee},
                {"std_wheel", m.std_wheel},
                {"weight", m.weight}};
}

TorqueMode mode_from_json(const json& j, const TorqueMode& defaults) {
    TorqueMode m = defaults;
    m.mean_knee = j.value("mean_knee", m.mean_knee);
    m.mean_wheel = j.value("mean_wheel", m.mean_wheel);
    m.std_knee = j.value("std_knee", m.std_knee);
    m.std_wheel = j.value("std_wheel", m.std_wheel);
    m.weight = j.value("weight", m.weight);
    return m;
}

}  // namespace

std::string to_json_string(const ScenarioConfig& cfg) {
    json modes = json::array();
    for (const TorqueMode& m : cfg.contact_torques) {
        modes.push_back(mode_to_json(m));
    }
    const json j{
        {"sample_rate_hz", cfg.sample_rate_hz},
        {"roll_duration_s", cfg.roll_duration_s},
        {"fall_duration_s", cfg.fall_duration_s},
        {"stabilization_duration_s", cfg.stabilization_duration_s},
        {"drops", cfg.drops},
        {"contact_torques", modes},
        {"no_contact_torques", mode_to_json(cfg.no_contact_torques)},
        {"takeoff_torque_decay_s", cfg.takeoff_torque_decay_s},
        {"contact_vibration_std", cfg.contact_vibration_std},
        {"takeoff_bump_amplitude", cfg.takeoff_bump_amplitude},
        {"takeoff_bump_width_s", cfg.takeoff_bump_width_s},
        {"landing_impulse_amplitude", cfg.landing_impulse_amplitude},
        {"landing_impulse_width_s", cfg.landing_impulse_width_s},
        {"freefall_accel", cfg.freefall_accel},
        {"noise_std_knee", cfg.noise_std_knee},
        {"noise_std_wheel", cfg.noise_std_wheel},
        {"noise_std_acc", cfg.noise_std_acc},
        {"fit_samples_per_state", cfg.fit_samples_per_state},
        {"seed", cfg.seed},
    };
    return j.dump(2);
}

ScenarioConfig scenario_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario parse error: ") + e.what());
    }
    ScenarioConfig cfg;
    cfg.sample_rate_hz = j.value("sample_rate_hz", cfg.sample_rate_hz);
    cfg.roll_duration_s = j.value("roll_duration_s", cfg.roll_duration_s);
    cfg.fall_duration_s = j.value("fall_duration_s", cfg.fall_duration_s);
    cfg.stabilization_duration_s =
        j.value("stabilization_duration_s", cfg.stabilization_duration_s);
    cfg.drops = j.value("drops", cfg.drops);
    if (j.contains("contact_torques")) {
        std::vector<TorqueMode> modes;
        for (const json& m : j["contact_torques"]) {
            modes.push_back(mode_from_json(m, TorqueMode{}));
        }
        cfg.contact_torques = std::move(modes);
    }
    if (j.contains("no_contact_torques")) {
        cfg.no_contact_torques = mode_from_json(j["no_contact_torques"], cfg.no_contact_torques);
    }
    cfg.takeoff_torque_decay_s = j.value("takeoff_torque_decay_s", cfg.takeoff_torque_decay_s);
    cfg.contact_vibration_std = j.value("contact_vibration_std", cfg.contact_vibration_std);
    cfg.takeoff_bump_amplitude = j.value("takeoff_bump_amplitude", cfg.takeoff_bump_amplitude);
    cfg.takeoff_bump_width_s = j.value("takeoff_bump_width_s", cfg.takeoff_bump_width_s);
    cfg.landing_impulse_amplitude =
        j.value("landing_impulse_amplitude", cfg.landing_impulse_amplitude);
    cfg.landing_impulse_width_s = j.value("landing_impulse_width_s", cfg.landing_impulse_width_s);
    cfg.freefall_accel = j.value("freefall_accel", cfg.freefall_accel);
    cfg.noise_std_knee = j.value("noise_std_knee", cfg.noise_std_knee);
    cfg.noise_std_wheel = j.value("noise_std_wheel", cfg.noise_std_wheel);
    cfg.noise_std_acc = j.value("noise_std_acc", cfg.noise_std_acc);
    cfg.fit_samples_per_state = j.value("fit_samples_per_state", cfg.fit_samples_per_state);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_config_from_json(buf.str());
}

}  // namespace tact

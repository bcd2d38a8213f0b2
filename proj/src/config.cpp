// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tact/errors.hpp"

namespace tact {

namespace {

using nlohmann::json;

Taper taper_from_name(const std::string& s) {
    if (s == "rectangular") {
        return Taper::kRectangular;
    }
    if (s == "hann") {
        return Taper::kHann;
    }
    throw ValidationError("unknown taper '" + s + "'");
}

LegMode leg_mode_from_name(const std::string& s) {
    if (s == "mean") {
        return LegMode::kMean;
    }
    if (s == "left") {
        return LegMode::kLeft;
    }
    if (s == "right") {
        return LegMode::kRight;
    }
    throw ValidationError("unknown leg aggregation mode '" + s + "'");
}

SwitchFeature switch_feature_from_name(const std::string& s) {
    if (s == "total_power") {
        return SwitchFeature::kTotalPower;
    }
    if (s == "max_bin") {
        return SwitchFeature::kMaxBin;
    }
    throw ValidationError("unknown switch feature '" + s + "'");
}

json to_json(const EstimatorConfig& cfg) {
    return json{
        {"switch_sigmoid", {{"offset", cfg.switch_sigmoid.offset}, {"slope", cfg.switch_sigmoid.slope}}},
        {"direction_sigmoid",
         {{"offset", cfg.direction_sigmoid.offset}, {"slope", cfg.direction_sigmoid.slope}}},
        {"decision_threshold", cfg.decision_threshold},
        {"window_length", cfg.window_length},
        {"sample_rate_hz", cfg.sample_rate_hz},
        {"leg_mode", leg_mode_name(cfg.leg_mode)},
        {"density_floor", cfg.density_floor},
        {"taper", taper_name(cfg.taper)},
        {"grid_resolution", cfg.grid_resolution},
        {"switch_feature", switch_feature_name(cfg.switch_feature)},
    };
}

EstimatorConfig from_json(const json& j) {
    EstimatorConfig cfg;
    if (j.contains("switch_sigmoid")) {
        cfg.switch_sigmoid.offset = j["switch_sigmoid"].value("offset", cfg.switch_sigmoid.offset);
        cfg.switch_sigmoid.slope = j["switch_sigmoid"].value("slope", cfg.switch_sigmoid.slope);
    }
    if (j.contains("direction_sigmoid")) {
        cfg.direction_sigmoid.offset =
            j["direction_sigmoid"].value("offset", cfg.direction_sigmoid.offset);
        cfg.direction_sigmoid.slope = j["direction_sigmoid"].value("slope", cfg.direction_sigmoid.slope);
    }
    cfg.decision_threshold = j.value("decision_threshold", cfg.decision_threshold);
    cfg.window_length = j.value("window_length", cfg.window_length);
    cfg.sample_rate_hz = j.value("sample_rate_hz", cfg.sample_rate_hz);
    if (j.contains("leg_mode")) {
        cfg.leg_mode = leg_mode_from_name(j["leg_mode"].get<std::string>());
    }
    cfg.density_floor = j.value("density_floor", cfg.density_floor);
    if (j.contains("taper")) {
        cfg.taper = taper_from_name(j["taper"].get<std::string>());
    }
    cfg.grid_resolution = j.value("grid_resolution", cfg.grid_resolution);
    if (j.contains("switch_feature")) {
        cfg.switch_feature = switch_feature_from_name(j["switch_feature"].get<std::string>());
    }
    cfg.validate();
    return cfg;
}

}  // namespace

void EstimatorConfig::validate() const {
    if (!(switch_sigmoid.slope > 0.0) || !(direction_sigmoid.slope > 0.0)) {
        throw ValidationError("sigmoid slopes must be positive");
    }
    if (!std::isfinite(switch_sigmoid.offset) || !std::isfinite(direction_sigmoid.offset)) {
        throw ValidationError("sigmoid offsets must be finite");
    }
    if (!(decision_threshold > 0.0) || !(decision_threshold < 1.0)) {
        throw ValidationError("decision threshold must lie in (0, 1)");
    }
    if (window_length < 8) {
        throw ValidationError("window length must be at least 8 samples");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("sample rate must be positive");
    }
    if (!(density_floor > 0.0)) {
        throw ValidationError("density floor must be positive");
    }
    if (grid_resolution < 2) {
        throw ValidationError("grid resolution must be at least 2");
    }
}

const char* taper_name(Taper t) {
    return t == Taper::kRectangular ? "rectangular" : "hann";
}

const char* leg_mode_name(LegMode m) {
    switch (m) {
        case LegMode::kMean:
            return "mean";
        case LegMode::kLeft:
            return "left";
        default:
            return "right";
    }
}

const char* switch_feature_name(SwitchFeature f) {
    return f == SwitchFeature::kTotalPower ? "total_power" : "max_bin";
}

std::string to_json_string(const EstimatorConfig& cfg) {
    return to_json(cfg).dump(2);
}

EstimatorConfig estimator_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

EstimatorConfig load_estimator_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return estimator_config_from_json(buf.str());
}

std::uint64_t config_hash(const EstimatorConfig& cfg) {
    const std::string canonical = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace tact

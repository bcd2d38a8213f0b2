// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/model_io.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "tact/errors.hpp"

namespace tact {

namespace {

using nlohmann::json;

constexpr int kModelVersion = 1;

json model_to_json(const KdeModel& model) {
    return json{
        {"state", contact_label_name(model.state())},
        {"bandwidth_nm", model.bandwidth()},
        {"sample_count", model.sample_count()},
        {"min_bounds", {model.min_bounds()[0], model.min_bounds()[1]}},
        {"max_bounds", {model.max_bounds()[0], model.max_bounds()[1]}},
        {"resolution", model.resolution()},
        {"density_floor", model.density_floor()},
        {"log_density", model.log_grid()},
    };
}

std::shared_ptr<const KdeModel> model_from_json(const json& j, ContactLabel expected) {
    const std::string state = j.at("state").get<std::string>();
    if (state != contact_label_name(expected)) {
        throw ValidationError("model state '" + state + "' does not match its slot");
    }
    const auto min_b = j.at("min_bounds").get<std::vector<double>>();
    const auto max_b = j.at("max_bounds").get<std::vector<double>>();
    if (min_b.size() != 2 || max_b.size() != 2) {
        throw ValidationError("model bounds must have two entries per side");
    }
    return std::make_shared<const KdeModel>(KdeModel::from_parts(
        expected, j.at("bandwidth_nm").get<double>(), j.at("sample_count").get<std::size_t>(),
        {min_b[0], min_b[1]}, {max_b[0], max_b[1]}, j.at("resolution").get<std::size_t>(),
        j.at("log_density").get<std::vector<double>>(), j.at("density_floor").get<double>()));
}

}  // namespace

void write_models(const std::string& path, const FittedModels& models) {
    if (!models.contact || !models.no_contact) {
        throw ValidationError("model file needs both fitted states");
    }
    const json doc{
        {"format", "tact-model"},
        {"version", kModelVersion},
        {"config", json::parse(to_json_string(models.config))},
        {"config_hash", models.fit_hash},
        {"contact", model_to_json(*models.contact)},
        {"no_contact", model_to_json(*models.no_contact)},
    };

    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out << doc.dump() << "\n";
        if (!out) {
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        throw IoError("cannot move '" + tmp.string() + "' to '" + target.string() +
                      "': " + ec.message());
    }
}

FittedModels read_models(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open model file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ValidationError("model file '" + path + "' parse error: " + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "tact-model") {
            throw ValidationError("'" + path + "' is not a tact model file");
        }
        if (doc.at("version").get<int>() != kModelVersion) {
            throw ValidationError("unsupported model version " +
                                  std::to_string(doc.at("version").get<int>()));
        }
        FittedModels models;
        models.config = estimator_config_from_json(doc.at("config").dump());
        models.fit_hash = doc.at("config_hash").get<std::uint64_t>();
        models.contact = model_from_json(doc.at("contact"), ContactLabel::kContact);
        models.no_contact = model_from_json(doc.at("no_contact"), ContactLabel::kNoContact);
        return models;
    } catch (const json::exception& e) {
        throw ValidationError("model file '" + path + "' is malformed: " + e.what());
    }
}

}  // namespace tact

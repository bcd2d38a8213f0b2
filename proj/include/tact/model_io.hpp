// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "tact/config.hpp"
#include "tact/density.hpp"

namespace tact {

/// The pair of fitted measurement models plus the estimator config they
/// were fitted under. Written as a single versioned JSON document whose
/// serialization round-trips byte-identically.
struct FittedModels {
    EstimatorConfig config;
    std::uint64_t fit_hash = 0;  ///< config_hash(config) at fit time
    std::shared_ptr<const KdeModel> contact;
    std::shared_ptr<const KdeModel> no_contact;
};

void write_models(const std::string& path, const FittedModels& models);
FittedModels read_models(const std::string& path);

}  // namespace tact

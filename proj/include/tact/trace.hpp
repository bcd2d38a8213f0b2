// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tact/config.hpp"
#include "tact/density.hpp"
#include "tact/synth.hpp"

namespace tact {

/// One row of a trace file: per-leg signed torques plus the vertical
/// acceleration, optionally labelled with the ground-truth contact state.
struct TraceRow {
    double time_s = 0.0;
    double tau_knee_left = 0.0;
    double tau_knee_right = 0.0;
    double tau_wheel_left = 0.0;
    double tau_wheel_right = 0.0;
    double acc_z = 0.0;
    std::optional<bool> contact;  ///< empty = unlabeled
};

/// In-memory form of a trace file: versioned header, optional transition
/// events, rows in time order.
struct TraceFile {
    int version = 1;
    double sample_rate_hz = 0.0;
    std::vector<TransitionEvent> events;
    std::vector<TraceRow> rows;
};

enum class Strictness : std::uint8_t { kStrict, kLenient };

/// Serializes with full-precision decimal numbers (shortest round-trip
/// form), so write -> read -> write is byte-identical. The write is atomic:
/// a temp file is renamed into place.
void write_trace(const std::string& path, const TraceFile& trace);

/// Parses a trace file. In strict mode any malformed row aborts with a
/// ValidationError naming the line; in lenient mode the row is skipped and
/// reported through `warnings` when given.
TraceFile read_trace(const std::string& path, Strictness strictness = Strictness::kStrict,
                     std::vector<std::string>* warnings = nullptr);

/// Converts a synthetic trace for writing; both legs carry the emitted
/// torque values.
TraceFile trace_from_synth(const LabeledTrace& trace);

/// One preprocessed estimator input tick.
struct IngestStep {
    double time_s = 0.0;
    TorqueSample torque;  ///< aggregated absolute torques
    double acc_z = 0.0;
    std::optional<bool> contact;
};

struct IngestResult {
    double sample_rate_hz = 0.0;
    std::vector<IngestStep> steps;
    std::vector<TransitionEvent> events;
    std::vector<std::string> warnings;
};

/// Reads and preprocesses a trace: per-leg torques aggregated according to
/// cfg.leg_mode (the default takes the mean of the per-leg absolute
/// values), absolute values applied, timestamps checked for strict
/// monotonicity and agreement with the declared sample rate (within 1% on
/// the median step).
IngestResult ingest(const std::string& path, const EstimatorConfig& cfg,
                    Strictness strictness = Strictness::kStrict);

/// The torque aggregation rule by itself (used by ingest).
TorqueSample aggregate_torques(const TraceRow& row, LegMode mode);

}  // namespace tact

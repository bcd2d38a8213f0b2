// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "tact/config.hpp"
#include "tact/density.hpp"
#include "tact/synth.hpp"

namespace tact {

/// Precision/recall of one class. Metrics with an empty denominator are
/// reported as absent, never silently as zero.
struct ClassMetrics {
    std::optional<double> precision;
    std::optional<double> recall;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

struct PointwiseReport {
    ClassMetrics contact;
    ClassMetrics no_contact;
    double threshold = 0.8;
    std::size_t total = 0;
    std::size_t correct = 0;
    double success_rate = 0.0;  ///< correct / total
};

/// Point-wise binary classification metrics: prediction is contact iff
/// P(contact) >= threshold. Throws ValidationError on length mismatch or
/// empty input.
PointwiseReport pointwise_metrics(const std::vector<double>& p_contact,
                                  const std::vector<bool>& labels, double threshold = 0.8);

/// Edge detector over the thresholded probability sequence: a takeoff at
/// every contact -> no-contact flip, a landing at the reverse, stamped with
/// the edge step's timestamp. No debouncing: one event per crossing.
std::vector<TransitionEvent> detect_events(const std::vector<double>& p_contact,
                                           const std::vector<double>& times, double threshold);

/// Convenience overload with times i / sample_rate.
std::vector<TransitionEvent> detect_events(const std::vector<double>& p_contact, double threshold,
                                           double sample_rate_hz);

struct MatchedPair {
    double true_time_s = 0.0;
    double detected_time_s = 0.0;
};

struct EventKindReport {
    std::optional<double> precision;
    std::optional<double> recall;
    std::vector<MatchedPair> matches;
    std::vector<double> false_positive_times;
    std::size_t truth_count = 0;
    std::size_t excluded = 0;  ///< extra in-window detections, neither TP nor FP
};

struct EventReport {
    EventKindReport takeoff;
    EventKindReport landing;
    double window_s = 0.25;
};

/// Matches detections to true events per kind. Each true event takes the
/// earliest same-kind detection inside the closed window
/// [t_true, t_true + window]; later same-kind detections inside that
/// window are excluded from the counts, detections outside every window
/// are false positives, unmatched true events are false negatives.
EventReport match_events(const std::vector<TransitionEvent>& detected,
                         const std::vector<TransitionEvent>& truth, double window_s = 0.25);

struct KindLatency {
    std::size_t count = 0;
    std::optional<double> mean_ms;
    std::optional<double> stddev_ms;  ///< population stddev
};

struct LatencyReport {
    KindLatency takeoff;
    KindLatency landing;
};

/// Latency statistics over the matched pairs only.
LatencyReport latency_stats(const EventReport& report);

struct SweepOptions {
    std::vector<double> torque_sigmas{0.0, 0.5, 1.0, 3.0, 10.0};  ///< Nm, both channels
    std::vector<double> accel_sigmas{0.0, 1.0, 2.0, 6.0, 10.0};   ///< m/s^2
    std::size_t episodes_per_cell = 20;
    std::size_t jobs = 1;
};

struct SweepReport {
    std::vector<double> torque_sigmas;
    std::vector<double> accel_sigmas;
    /// Row-major success rates, torque index major.
    std::vector<double> success;
    std::size_t episodes_per_cell = 0;

    double cell(std::size_t torque_idx, std::size_t accel_idx) const {
        return success[torque_idx * accel_sigmas.size() + accel_idx];
    }
};

/// Success rate of one sweep cell: episodes generated at the given noise
/// levels, run through the Bayes filter against clean-fit models, steps
/// classified at the config's decision threshold. The cell's RNG stream
/// depends only on (base seed, sigma indices, episode), so cells can run
/// in any order or in parallel.
double sweep_cell(const ScenarioConfig& base, std::size_t torque_idx, double torque_sigma,
                  std::size_t accel_idx, double accel_sigma, std::size_t episodes,
                  const EstimatorConfig& cfg, const std::shared_ptr<const KdeModel>& contact,
                  const std::shared_ptr<const KdeModel>& no_contact);

/// Full noise-robustness grid. `on_cell`, when given, is invoked after
/// every finished cell (from the driving thread) with the cell indices and
/// its success rate.
SweepReport noise_sweep(const ScenarioConfig& base, const SweepOptions& options,
                        const EstimatorConfig& cfg, std::shared_ptr<const KdeModel> contact,
                        std::shared_ptr<const KdeModel> no_contact,
                        const std::function<void(std::size_t, std::size_t, double)>& on_cell = {},
                        const std::function<bool(std::size_t, std::size_t, double*)>& lookup = {});

}  // namespace tact

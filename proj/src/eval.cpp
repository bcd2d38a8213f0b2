// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/eval.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "tact/errors.hpp"
#include "tact/filter.hpp"

namespace tact {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<TransitionEvent> events_of_kind(const std::vector<TransitionEvent>& events,
                                            EventKind kind) {
    std::vector<TransitionEvent> out;
    for (const TransitionEvent& e : events) {
        if (e.kind == kind) {
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const TransitionEvent& a, const TransitionEvent& b) { return a.time_s < b.time_s; });
    return out;
}

EventKindReport match_kind(const std::vector<TransitionEvent>& detected,
                           const std::vector<TransitionEvent>& truth, EventKind kind,
                           double window_s) {
    const std::vector<TransitionEvent> det = events_of_kind(detected, kind);
    const std::vector<TransitionEvent> tru = events_of_kind(truth, kind);

    EventKindReport report;
    report.truth_count = tru.size();
    std::vector<bool> consumed(det.size(), false);

    for (const TransitionEvent& t : tru) {
        bool matched = false;
        for (std::size_t i = 0; i < det.size(); ++i) {
            if (consumed[i]) {
                continue;
            }
            const double d = det[i].time_s;
            if (d < t.time_s) {
                continue;
            }
            if (d > t.time_s + window_s) {
                break;  // det is sorted; nothing later can fall in the window
            }
            consumed[i] = true;
            if (!matched) {
                matched = true;
                report.matches.push_back({t.time_s, d});
            } else {
                ++report.excluded;  // extra detection inside the window
            }
        }
    }
    for (std::size_t i = 0; i < det.size(); ++i) {
        if (!consumed[i]) {
            report.false_positive_times.push_back(det[i].time_s);
        }
    }
    report.precision = ratio(report.matches.size(),
                             report.matches.size() + report.false_positive_times.size());
    report.recall = ratio(report.matches.size(), report.truth_count);
    return report;
}

KindLatency latency_of(const std::vector<MatchedPair>& matches) {
    KindLatency out;
    out.count = matches.size();
    if (matches.empty()) {
        return out;
    }
    double mean = 0.0;
    for (const MatchedPair& m : matches) {
        mean += (m.detected_time_s - m.true_time_s) * 1000.0;
    }
    mean /= static_cast<double>(matches.size());
    double var = 0.0;
    for (const MatchedPair& m : matches) {
        const double d = (m.detected_time_s - m.true_time_s) * 1000.0 - mean;
        var += d * d;
    }
    var /= static_cast<double>(matches.size());
    out.mean_ms = mean;
    out.stddev_ms = std::sqrt(var);
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t episode_seed(std::uint64_t base, std::size_t ti, std::size_t ai, std::size_t ep) {
    std::uint64_t h = splitmix64(base ^ 0x7ac75e1200000000ull);
    h = splitmix64(h ^ static_cast<std::uint64_t>(ti));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(ai) << 20));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(ep) << 40));
    return h;
}

}  // namespace

PointwiseReport pointwise_metrics(const std::vector<double>& p_contact,
                                  const std::vector<bool>& labels, double threshold) {
    if (p_contact.size() != labels.size()) {
        throw ValidationError("probability and label sequences differ in length (" +
                              std::to_string(p_contact.size()) + " vs " +
                              std::to_string(labels.size()) + ")");
    }
    if (p_contact.empty()) {
        throw ValidationError("pointwise metrics need at least one step");
    }

    PointwiseReport report;
    report.threshold = threshold;
    report.total = p_contact.size();
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    for (std::size_t i = 0; i < p_contact.size(); ++i) {
        const bool pred = p_contact[i] >= threshold;
        const bool truth = labels[i];
        if (pred && truth) {
            ++tp;
        } else if (pred && !truth) {
            ++fp;
        } else if (!pred && truth) {
            ++fn;
        } else {
            ++tn;
        }
    }
    report.contact = {ratio(tp, tp + fp), ratio(tp, tp + fn), tp, fp, fn, tn};
    // The no-contact class sees the same confusion matrix from the other side.
    report.no_contact = {ratio(tn, tn + fn), ratio(tn, tn + fp), tn, fn, fp, tp};
    report.correct = tp + tn;
    report.success_rate = static_cast<double>(report.correct) / static_cast<double>(report.total);
    return report;
}

std::vector<TransitionEvent> detect_events(const std::vector<double>& p_contact,
                                           const std::vector<double>& times, double threshold) {
    if (p_contact.empty()) {
        throw ValidationError("event detection needs a non-empty sequence");
    }
    if (p_contact.size() != times.size()) {
        throw ValidationError("probability and time sequences differ in length");
    }
    std::vector<TransitionEvent> events;
    bool prev = p_contact[0] >= threshold;
    for (std::size_t i = 1; i < p_contact.size(); ++i) {
        const bool cur = p_contact[i] >= threshold;
        if (cur != prev) {
            events.push_back({times[i], cur ? EventKind::kLanding : EventKind::kTakeoff});
        }
        prev = cur;
    }
    return events;
}

std::vector<TransitionEvent> detect_events(const std::vector<double>& p_contact, double threshold,
                                           double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("sample rate must be positive");
    }
    std::vector<double> times(p_contact.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = static_cast<double>(i) / sample_rate_hz;
    }
    return detect_events(p_contact, times, threshold);
}

EventReport match_events(const std::vector<TransitionEvent>& detected,
                         const std::vector<TransitionEvent>& truth, double window_s) {
    if (!(window_s >= 0.0)) {
        throw ValidationError("matching window must be non-negative");
    }
    EventReport report;
    report.window_s = window_s;
    report.takeoff = match_kind(detected, truth, EventKind::kTakeoff, window_s);
    report.landing = match_kind(detected, truth, EventKind::kLanding, window_s);
    return report;
}

LatencyReport latency_stats(const EventReport& report) {
    return {latency_of(report.takeoff.matches), latency_of(report.landing.matches)};
}

double sweep_cell(const ScenarioConfig& base, std::size_t torque_idx, double torque_sigma,
                  std::size_t accel_idx, double accel_sigma, std::size_t episodes,
                  const EstimatorConfig& cfg, const std::shared_ptr<const KdeModel>& contact,
                  const std::shared_ptr<const KdeModel>& no_contact) {
    if (episodes == 0) {
        throw ValidationError("sweep needs at least one episode per cell");
    }
    std::size_t correct = 0;
    std::size_t total = 0;
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        ScenarioConfig scenario = base;
        scenario.noise_std_knee = torque_sigma;
        scenario.noise_std_wheel = torque_sigma;
        scenario.noise_std_acc = accel_sigma;
        scenario.seed = episode_seed(base.seed, torque_idx, accel_idx, ep);
        const LabeledTrace trace = generate_trace(scenario);

        ContactFilter filter(cfg, contact, no_contact);
        for (const TraceStep& step : trace.steps) {
            const TorqueSample m{std::abs(step.tau_knee), std::abs(step.tau_wheel)};
            const StepResult r = filter.step(step.acc_z, m);
            const bool pred = r.belief.p_contact >= cfg.decision_threshold;
            correct += (pred == step.contact) ? 1 : 0;
            ++total;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(total);
}

SweepReport noise_sweep(const ScenarioConfig& base, const SweepOptions& options,
                        const EstimatorConfig& cfg, std::shared_ptr<const KdeModel> contact,
                        std::shared_ptr<const KdeModel> no_contact,
                        const std::function<void(std::size_t, std::size_t, double)>& on_cell,
                        const std::function<bool(std::size_t, std::size_t, double*)>& lookup) {
    base.validate();
    if (options.torque_sigmas.empty() || options.accel_sigmas.empty()) {
        throw ValidationError("sweep needs at least one sigma per axis");
    }

    SweepReport report;
    report.torque_sigmas = options.torque_sigmas;
    report.accel_sigmas = options.accel_sigmas;
    report.episodes_per_cell = options.episodes_per_cell;
    const std::size_t n_cells = options.torque_sigmas.size() * options.accel_sigmas.size();
    report.success.assign(n_cells, 0.0);

    struct Cell {
        std::size_t ti;
        std::size_t ai;
    };
    std::vector<Cell> pending;
    for (std::size_t ti = 0; ti < options.torque_sigmas.size(); ++ti) {
        for (std::size_t ai = 0; ai < options.accel_sigmas.size(); ++ai) {
            double cached = 0.0;
            if (lookup && lookup(ti, ai, &cached)) {
                report.success[ti * options.accel_sigmas.size() + ai] = cached;
            } else {
                pending.push_back({ti, ai});
            }
        }
    }

    const auto run_cell = [&](const Cell& c) {
        return sweep_cell(base, c.ti, options.torque_sigmas[c.ti], c.ai,
                          options.accel_sigmas[c.ai], options.episodes_per_cell, cfg, contact,
                          no_contact);
    };

    const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
    if (jobs == 1) {
        for (const Cell& c : pending) {
            const double rate = run_cell(c);
            report.success[c.ti * options.accel_sigmas.size() + c.ai] = rate;
            if (on_cell) {
                on_cell(c.ti, c.ai, rate);
            }
        }
        return report;
    }

    // Cells are independent; results are written back and reported in
    // deterministic cell order regardless of completion order.
    std::vector<std::future<double>> futures(pending.size());
    std::size_t next = 0;
    while (next < pending.size()) {
        const std::size_t batch = std::min(jobs, pending.size() - next);
        for (std::size_t k = 0; k < batch; ++k) {
            futures[next + k] =
                std::async(std::launch::async, run_cell, std::cref(pending[next + k]));
        }
        for (std::size_t k = 0; k < batch; ++k) {
            const Cell& c = pending[next + k];
            const double rate = futures[next + k].get();
            report.success[c.ti * options.accel_sigmas.size() + c.ai] = rate;
            if (on_cell) {
                on_cell(c.ti, c.ai, rate);
            }
        }
        next += batch;
    }
    return report;
}

}  // namespace tact

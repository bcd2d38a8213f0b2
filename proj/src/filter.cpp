// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/filter.hpp"

#include <algorithm>
#include <cmath>

#include "tact/errors.hpp"

namespace tact {

namespace {

Belief clamp_belief(const Belief& b) {
    const double pc = std::clamp(b.p_contact, kBeliefClamp, 1.0 - kBeliefClamp);
    const double pn = std::clamp(b.p_no_contact, kBeliefClamp, 1.0 - kBeliefClamp);
    const double norm = pc + pn;
    return {pc / norm, pn / norm};
}

double switch_feature_value(const PowerSpectrum& spec, SwitchFeature feature) {
    if (feature == SwitchFeature::kMaxBin) {
        double best = 0.0;
        for (double b : spec.bins) {
            best = std::max(best, b);
        }
        return best;
    }
    return spec.total_power;
}

}  // namespace

double sigmoid(double x, double offset, double slope) {
    if (!(slope > 0.0)) {
        throw ValidationError("sigmoid slope must be positive");
    }
    const double z = slope * (x - offset);
    // Split on the sign so exp never overflows.
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

TransitionMatrix transition_from_spectrum(const PowerSpectrum& spec, const EstimatorConfig& cfg) {
    TransitionMatrix trans;
    trans.p_switch = sigmoid(switch_feature_value(spec, cfg.switch_feature), cfg.switch_sigmoid);
    if (spec.total_power > 0.0) {
        trans.p_land_given_switch = sigmoid(median_frequency(spec), cfg.direction_sigmoid);
    } else {
        // No spectral evidence: a switch has no preferred direction.
        trans.p_land_given_switch = 0.5;
    }
    return trans;
}

TransitionMatrix transition_model(const AccelWindow& window, const EstimatorConfig& cfg) {
    return transition_from_spectrum(power_spectrum(window, cfg.taper), cfg);
}

Belief predict(const Belief& belief, const TransitionMatrix& trans) {
    Belief prior;
    prior.p_contact = trans.contact_given_contact() * belief.p_contact +
                      trans.contact_given_no_contact() * belief.p_no_contact;
    prior.p_no_contact = trans.no_contact_given_contact() * belief.p_contact +
                         trans.no_contact_given_no_contact() * belief.p_no_contact;
    return prior;
}

Belief update(const Belief& prior, double lik_contact, double lik_no_contact) {
    const double log_c = std::log(lik_contact) + std::log(prior.p_contact);
    const double log_n = std::log(lik_no_contact) + std::log(prior.p_no_contact);
    const double peak = std::max(log_c, log_n);
    const double ec = std::exp(log_c - peak);
    const double en = std::exp(log_n - peak);
    const double norm = ec + en;
    return {ec / norm, en / norm};
}

Belief update(const Belief& prior, const TorqueSample& m, const KdeModel& contact_model,
              const KdeModel& no_contact_model) {
    return update(prior, contact_model.likelihood(m), no_contact_model.likelihood(m));
}

double measurement_only(const TorqueSample& m, const KdeModel& contact_model,
                        const KdeModel& no_contact_model) {
    const double fc = contact_model.likelihood(m);
    const double fn = no_contact_model.likelihood(m);
    return fc / (fc + fn);
}

ContactFilter::ContactFilter(const EstimatorConfig& cfg,
                             std::shared_ptr<const KdeModel> contact_model,
                             std::shared_ptr<const KdeModel> no_contact_model)
    : cfg_(cfg),
      contact_(std::move(contact_model)),
      no_contact_(std::move(no_contact_model)),
      window_(cfg.window_length, cfg.sample_rate_hz) {
    cfg_.validate();
    if (!contact_ || !no_contact_) {
        throw ValidationError("filter needs both fitted measurement models");
    }
}

StepResult ContactFilter::step(double acc_z, const TorqueSample& m) {
    // Validate every input before touching any state.
    if (!std::isfinite(acc_z)) {
        throw SignalError("non-finite acceleration sample rejected");
    }
    validate(m);

    window_.push(acc_z);

    StepResult out;
    if (window_.full()) {
        const PowerSpectrum spec = power_spectrum(window_, cfg_.taper);
        out.total_power = switch_feature_value(spec, cfg_.switch_feature);
        if (spec.total_power > 0.0) {
            out.median_frequency = median_frequency(spec);
        }
        out.transition = transition_from_spectrum(spec, cfg_);
    } else {
        out.transition = {sigmoid(0.0, cfg_.switch_sigmoid), 0.5};
    }

    const Belief prior = predict(clamp_belief(belief_), out.transition);
    out.lik_contact = contact_->likelihood(m);
    out.lik_no_contact = no_contact_->likelihood(m);
    belief_ = update(prior, out.lik_contact, out.lik_no_contact);
    out.belief = belief_;
    ++steps_;
    return out;
}

void ContactFilter::reset() {
    window_.clear();
    belief_ = {kFlatPrior, kFlatPrior};
    steps_ = 0;
}

std::vector<StepResult> run_estimator(const EstimatorConfig& cfg,
                                      std::shared_ptr<const KdeModel> contact_model,
                                      std::shared_ptr<const KdeModel> no_contact_model,
                                      const std::vector<double>& acc_z,
                                      const std::vector<TorqueSample>& torques,
                                      EstimatorMode mode) {
    if (acc_z.size() != torques.size()) {
        throw ValidationError("acceleration and torque streams must have equal length");
    }
    std::vector<StepResult> out;
    out.reserve(acc_z.size());
    if (mode == EstimatorMode::kMeasurementOnly) {
        for (std::size_t i = 0; i < torques.size(); ++i) {
            StepResult r;
            r.lik_contact = contact_model->likelihood(torques[i]);
            r.lik_no_contact = no_contact_model->likelihood(torques[i]);
            const double p = r.lik_contact / (r.lik_contact + r.lik_no_contact);
            r.belief = {p, 1.0 - p};
            out.push_back(r);
        }
        return out;
    }
    ContactFilter filter(cfg, std::move(contact_model), std::move(no_contact_model));
    for (std::size_t i = 0; i < acc_z.size(); ++i) {
        out.push_back(filter.step(acc_z[i], torques[i]));
    }
    return out;
}

}  // namespace tact

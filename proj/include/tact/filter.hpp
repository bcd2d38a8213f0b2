// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tact/config.hpp"
#include "tact/density.hpp"
#include "tact/signal.hpp"

namespace tact {

/// Normalized two-state posterior over {contact, no contact}.
struct Belief {
    double p_contact = kFlatPrior;
    double p_no_contact = kFlatPrior;
};

/// Time-varying transition model in product form: a non-directional switch
/// probability times the landing direction given a switch. The derived 2x2
/// matrix is row stochastic by construction.
struct TransitionMatrix {
    double p_switch = 0.0;             ///< P(S_t != S_{t-1})
    double p_land_given_switch = 0.5;  ///< P(S_t = C | switch)

    double no_contact_given_contact() const { return (1.0 - p_land_given_switch) * p_switch; }
    double contact_given_contact() const { return 1.0 - no_contact_given_contact(); }
    double contact_given_no_contact() const { return p_land_given_switch * p_switch; }
    double no_contact_given_no_contact() const { return 1.0 - contact_given_no_contact(); }
};

/// Logistic function 1 / (1 + exp(-slope * (x - offset))). Strictly
/// increasing in x; saturates without overflowing. Throws ValidationError
/// unless slope > 0.
double sigmoid(double x, double offset, double slope);
inline double sigmoid(double x, const SigmoidParams& p) {
    return sigmoid(x, p.offset, p.slope);
}

/// Transition matrix from a window's spectrum: switch probability from the
/// spectral power feature, direction from the median frequency. Landings
/// spread energy across the spectrum (high median), takeoffs concentrate
/// it at low frequencies. A zero-power spectrum has no direction evidence:
/// the switch stays at sigmoid(0) and the direction at 0.5.
TransitionMatrix transition_from_spectrum(const PowerSpectrum& spec, const EstimatorConfig& cfg);

/// Convenience wrapper computing the spectrum of a full window first.
TransitionMatrix transition_model(const AccelWindow& window, const EstimatorConfig& cfg);

/// Prediction step: prior belief = transition matrix times belief.
/// Normalization is preserved by row stochasticity.
Belief predict(const Belief& belief, const TransitionMatrix& trans);

/// Update step core: posterior proportional to likelihood times prior,
/// renormalized. Computed in log space.
Belief update(const Belief& prior, double lik_contact, double lik_no_contact);

/// Update step against the two fitted measurement models.
Belief update(const Belief& prior, const TorqueSample& m, const KdeModel& contact_model,
              const KdeModel& no_contact_model);

/// Stateless ablation: normalized likelihood ratio f_C / (f_C + f_notC),
/// i.e. the filter output under a flat prior at every step.
double measurement_only(const TorqueSample& m, const KdeModel& contact_model,
                        const KdeModel& no_contact_model);

/// Per-step diagnostics returned by ContactFilter::step.
struct StepResult {
    Belief belief;
    TransitionMatrix transition;
    double lik_contact = 0.0;
    double lik_no_contact = 0.0;
    /// Spectral switch feature; empty during window warm-up.
    std::optional<double> total_power;
    /// Median frequency in bin units; empty during warm-up or for a
    /// degenerate (zero-power) spectrum.
    std::optional<double> median_frequency;
};

/// Streaming recursive Bayes filter over synchronized (acc_z, torque)
/// sample pairs, one pair per tick.
///
/// Starts from the flat prior. Until the accel window first fills, the
/// transition matrix falls back to the identity-leaning matrix at
/// sigmoid(0) so the warm-up cannot fabricate transitions.
///
/// Single-owner; fitted models are shared read-only. Independent filters
/// over independent traces run in parallel with no shared mutable state.
class ContactFilter {
public:
    ContactFilter(const EstimatorConfig& cfg, std::shared_ptr<const KdeModel> contact_model,
                  std::shared_ptr<const KdeModel> no_contact_model);

    /// Advances one tick: pushes acc_z, assembles the transition matrix,
    /// predicts, updates with m. Throws SignalError on non-finite sensor
    /// values, leaving the state unchanged.
    StepResult step(double acc_z, const TorqueSample& m);

    const Belief& belief() const { return belief_; }
    std::size_t step_index() const { return steps_; }
    const EstimatorConfig& config() const { return cfg_; }

    /// Back to the flat prior and an empty window.
    void reset();

private:
    EstimatorConfig cfg_;
    std::shared_ptr<const KdeModel> contact_;
    std::shared_ptr<const KdeModel> no_contact_;
    AccelWindow window_;
    Belief belief_{kFlatPrior, kFlatPrior};
    std::size_t steps_ = 0;
};

enum class EstimatorMode : std::uint8_t { kBayes, kMeasurementOnly };

/// Runs a whole trace through the filter (or the measurement-only
/// ablation) and collects the per-step diagnostics.
std::vector<StepResult> run_estimator(const EstimatorConfig& cfg,
                                      std::shared_ptr<const KdeModel> contact_model,
                                      std::shared_ptr<const KdeModel> no_contact_model,
                                      const std::vector<double>& acc_z,
                                      const std::vector<TorqueSample>& torques,
                                      EstimatorMode mode = EstimatorMode::kBayes);

}  // namespace tact

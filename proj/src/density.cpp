// Copyright tact authors
// SPDX-License-Identifier: Apache-2.0

#include "tact/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tact/errors.hpp"

namespace tact {

namespace {

struct AxisStats {
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;  // sample stddev, ddof = 1
};

AxisStats axis_stats(const std::vector<TorqueSample>& points, int axis) {
    const auto value = [axis](const TorqueSample& p) {
        return axis == 0 ? p.tau_knee : p.tau_wheel;
    };
    AxisStats st;
    st.min = value(points.front());
    st.max = st.min;
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (const TorqueSample& p : points) {
        const double v = value(p);
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
        ++count;
        const double d = v - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (v - mean);
    }
    st.stddev = std::sqrt(m2 / static_cast<double>(count - 1));
    return st;
}

}  // namespace

void validate(const TorqueSample& m) {
    if (!std::isfinite(m.tau_knee) || !std::isfinite(m.tau_wheel)) {
        throw SignalError("non-finite torque sample rejected");
    }
    if (m.tau_knee < 0.0 || m.tau_wheel < 0.0) {
        throw SignalError("torque sample components must be absolute values (>= 0)");
    }
}

const char* contact_label_name(ContactLabel s) {
    return s == ContactLabel::kContact ? "contact" : "no_contact";
}

double scott_bandwidth(std::size_t n, std::size_t dims,
                       const std::vector<double>& marginal_stddevs) {
    if (n < 2) {
        throw DegenerateDataError("Scott bandwidth needs at least two samples");
    }
    if (dims < 1 || marginal_stddevs.size() != dims) {
        throw ValidationError("one marginal stddev required per dimension");
    }
    double log_sum = 0.0;
    for (std::size_t i = 0; i < dims; ++i) {
        const double s = marginal_stddevs[i];
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw DegenerateDataError("zero variance on axis " + std::to_string(i));
        }
        log_sum += std::log(s);
    }
    const double geo_mean = std::exp(log_sum / static_cast<double>(dims));
    return std::pow(static_cast<double>(n), -1.0 / static_cast<double>(dims + 4)) * geo_mean;
}

KdeModel KdeModel::fit(const std::vector<TorqueSample>& points, ContactLabel state,
                       const KdeFitOptions& opts) {
    if (points.size() < 2) {
        throw DegenerateDataError("KDE fit needs at least two samples, got " +
                                  std::to_string(points.size()));
    }
    if (opts.grid_resolution < 2) {
        throw ValidationError("grid resolution must be at least 2");
    }
    if (!(opts.density_floor > 0.0)) {
        throw ValidationError("density floor must be positive");
    }
    for (const TorqueSample& p : points) {
        validate(p);
    }

    const AxisStats knee = axis_stats(points, 0);
    const AxisStats wheel = axis_stats(points, 1);

    double h = 0.0;
    if (opts.bandwidth_override) {
        h = *opts.bandwidth_override;
        if (!(h > 0.0) || !std::isfinite(h)) {
            throw ValidationError("bandwidth override must be positive and finite");
        }
    } else if (knee.stddev > 0.0 && wheel.stddev > 0.0) {
        h = scott_bandwidth(points.size(), 2, {knee.stddev, wheel.stddev});
    } else if (knee.stddev > 0.0 || wheel.stddev > 0.0) {
        // One axis degenerate: keep the d = 2 sample-count exponent and take
        // the spread of the informative axis as the scale.
        const double spread = std::max(knee.stddev, wheel.stddev);
        h = std::pow(static_cast<double>(points.size()), -1.0 / 6.0) * spread;
    } else {
        throw DegenerateDataError(
            "zero variance on both torque axes (knee and wheel); "
            "set a bandwidth override to fit anyway");
    }

    KdeModel model;
    model.state_ = state;
    model.bandwidth_ = h;
    model.sample_count_ = points.size();
    model.resolution_ = opts.grid_resolution;
    model.density_floor_ = opts.density_floor;
    const double margin = opts.margin_bandwidths * h;
    model.min_ = {knee.min - margin, wheel.min - margin};
    model.max_ = {knee.max + margin, wheel.max + margin};

    const std::size_t res = opts.grid_resolution;
    const double dk = (model.max_[0] - model.min_[0]) / static_cast<double>(res - 1);
    const double dw = (model.max_[1] - model.min_[1]) / static_cast<double>(res - 1);
    const double inv_two_h2 = 1.0 / (2.0 * h * h);
    const double log_norm =
        -std::log(static_cast<double>(points.size()) * 2.0 * std::numbers::pi * h * h);

    model.log_grid_.resize(res * res);
    for (std::size_t i = 0; i < res; ++i) {
        const double x = model.min_[0] + static_cast<double>(i) * dk;
        for (std::size_t j = 0; j < res; ++j) {
            const double y = model.min_[1] + static_cast<double>(j) * dw;
            // Streaming log-sum-exp over the kernel exponents.
            double max_e = -std::numeric_limits<double>::infinity();
            double sum = 0.0;
            for (const TorqueSample& p : points) {
                const double ddx = x - p.tau_knee;
                const double ddy = y - p.tau_wheel;
                const double e = -(ddx * ddx + ddy * ddy) * inv_two_h2;
                if (e > max_e) {
                    sum = sum * std::exp(max_e - e) + 1.0;
                    max_e = e;
                } else {
                    sum += std::exp(e - max_e);
                }
            }
            model.log_grid_[i * res + j] = max_e + std::log(sum) + log_norm;
        }
    }
    return model;
}

KdeModel KdeModel::from_parts(ContactLabel state, double bandwidth, std::size_t sample_count,
                              std::array<double, 2> min_bounds, std::array<double, 2> max_bounds,
                              std::size_t resolution, std::vector<double> log_grid,
                              double density_floor) {
    if (!(bandwidth > 0.0)) {
        throw ValidationError("model bandwidth must be positive");
    }
    if (sample_count < 2) {
        throw ValidationError("model sample count must be at least 2");
    }
    if (resolution < 2 || log_grid.size() != resolution * resolution) {
        throw ValidationError("model grid size does not match its resolution");
    }
    for (int a = 0; a < 2; ++a) {
        if (!(min_bounds[a] < max_bounds[a])) {
            throw ValidationError("model grid bounds must be strictly ordered per axis");
        }
    }
    if (!(density_floor > 0.0)) {
        throw ValidationError("density floor must be positive");
    }
    KdeModel model;
    model.state_ = state;
    model.bandwidth_ = bandwidth;
    model.sample_count_ = sample_count;
    model.min_ = min_bounds;
    model.max_ = max_bounds;
    model.resolution_ = resolution;
    model.log_grid_ = std::move(log_grid);
    model.density_floor_ = density_floor;
    return model;
}

double KdeModel::log_likelihood(const TorqueSample& m) const {
    const std::size_t res = resolution_;
    const double dk = (max_[0] - min_[0]) / static_cast<double>(res - 1);
    const double dw = (max_[1] - min_[1]) / static_cast<double>(res - 1);

    const double x = std::clamp(m.tau_knee, min_[0], max_[0]);
    const double y = std::clamp(m.tau_wheel, min_[1], max_[1]);

    double u = (x - min_[0]) / dk;
    double v = (y - min_[1]) / dw;
    const std::size_t i = std::min(static_cast<std::size_t>(u), res - 2);
    const std::size_t j = std::min(static_cast<std::size_t>(v), res - 2);
    const double fu = u - static_cast<double>(i);
    const double fv = v - static_cast<double>(j);

    const double g00 = log_grid_[i * res + j];
    const double g10 = log_grid_[(i + 1) * res + j];
    const double g01 = log_grid_[i * res + j + 1];
    const double g11 = log_grid_[(i + 1) * res + j + 1];
    const double interp = (1.0 - fu) * (1.0 - fv) * g00 + fu * (1.0 - fv) * g10 +
                          (1.0 - fu) * fv * g01 + fu * fv * g11;
    return std::max(interp, std::log(density_floor_));
}

double KdeModel::likelihood(const TorqueSample& m) const {
    return std::max(std::exp(log_likelihood(m)), density_floor_);
}

double KdeModel::grid_mass() const {
    const std::size_t res = resolution_;
    const double dk = (max_[0] - min_[0]) / static_cast<double>(res - 1);
    const double dw = (max_[1] - min_[1]) / static_cast<double>(res - 1);
    double mass = 0.0;
    for (std::size_t i = 0; i < res; ++i) {
        const double wi = (i == 0 || i == res - 1) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < res; ++j) {
            const double wj = (j == 0 || j == res - 1) ? 0.5 : 1.0;
            mass += wi * wj * std::exp(log_grid_[i * res + j]);
        }
    }
    return mass * dk * dw;
}

}  // namespace tact

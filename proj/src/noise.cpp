#include "collapse/noise.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "collapse/errors.hpp"

namespace collapse {

NoisePath::NoisePath(double dt, std::vector<double> values)
    : dt_(dt), values_(std::move(values)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
        throw BadHorizon("dt must be positive and finite");
    }
    if (values_.empty()) {
        throw BadHorizon("a noise path needs at least one step");
    }
    cumulative_.resize(values_.size());
    double running = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        running += values_[i] * dt_;
        cumulative_[i] = running;
    }
}

NoisePath NoisePath::prefix(std::size_t n_steps) const {
    if (n_steps == 0 || n_steps > values_.size()) {
        throw BadHorizon("prefix length must be in [1, size()]");
    }
    return NoisePath(dt_, std::vector<double>(values_.begin(),
                                              values_.begin() + static_cast<std::ptrdiff_t>(n_steps)));
}

void NoisePath::write_csv(std::ostream& out) const {
    out << "step,t,w,B_running\n";
    char line[128];
    for (std::size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", i,
                      static_cast<double>(i) * dt_, values_[i], cumulative_[i]);
        out << line;
    }
}

std::size_t step_count(double horizon, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(horizon)) {
        throw BadHorizon("horizon and dt must be finite, dt positive");
    }
    // N = round(horizon/dt); the effective horizon is N*dt.
    if (horizon / dt < 1.0 - 1e-9) {
        throw BadHorizon("horizon shorter than one time step");
    }
    const auto n = static_cast<long long>(std::llround(horizon / dt));
    return static_cast<std::size_t>(n < 1 ? 1 : n);
}

NoisePath sample_raw_path(const ModelParams& params, double horizon, RngStream& rng) {
    params.validate();
    const std::size_t n = step_count(horizon, params.dt);
    const double sd = std::sqrt(params.lambda / params.dt);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = rng.gaussian(0.0, sd);
    }
    return NoisePath(params.dt, std::move(w));
}

double integrate_path(const NoisePath& path) {
    return path.cumulative().back();
}

double log_density_raw(const NoisePath& path, const ModelParams& params) {
    params.validate();
    const double var = params.lambda / params.dt;
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * var);
    double total = 0.0;
    for (double w : path.values()) {
        total += log_norm - 0.5 * w * w / var;
    }
    return total;
}

}  // namespace collapse

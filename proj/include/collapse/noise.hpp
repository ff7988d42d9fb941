#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "collapse/quantum.hpp"
#include "collapse/rng.hpp"

namespace collapse {

// Piecewise-constant white-noise record: value w_n held over
// [n*dt, (n+1)*dt). Holds at least one step.
class NoisePath {
public:
    NoisePath(double dt, std::vector<double> values);  // throws BadHorizon if empty

    double dt() const { return dt_; }
    std::size_t size() const { return values_.size(); }
    double horizon() const { return static_cast<double>(values_.size()) * dt_; }
    const std::vector<double>& values() const { return values_; }

    // Running integral B(t_n) = sum_{k<n} w_k dt; entry n covers n steps.
    const std::vector<double>& cumulative() const { return cumulative_; }
    double integral() const { return cumulative_.back(); }  // B at the horizon

    NoisePath prefix(std::size_t n_steps) const;  // throws BadHorizon if 0 or too long

    // Columns: step,t,w,B_running (B_running includes the step's own increment).
    void write_csv(std::ostream& out) const;

private:
    double dt_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
};

// Number of steps covering the horizon; throws BadHorizon unless >= 1.
std::size_t step_count(double horizon, double dt);

// White-noise sampling measure: each w_n ~ Normal(0, lambda/dt) independently.
NoisePath sample_raw_path(const ModelParams& params, double horizon, RngStream& rng);

// Log of the Gaussian sampling density of the path under sample_raw_path.
double log_density_raw(const NoisePath& path, const ModelParams& params);

// B at the horizon, i.e. the last cumulative entry.
double integrate_path(const NoisePath& path);

}  // namespace collapse

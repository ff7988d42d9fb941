#include "collapse/index_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "collapse/true_collapse.hpp"

namespace collapse {

std::vector<PointerSlice> evolve_index(const SystemState& state0, std::size_t n_slices,
                                       const ModelParams& params) {
    params.validate();
    (void)state0.normalized_state();  // rejects zero states
    if (n_slices < 1) {
        throw std::invalid_argument("n_slices must be >= 1");
    }
    std::vector<PointerSlice> slices(n_slices);
    for (std::size_t i = 0; i < n_slices; ++i) {
        slices[i] = PointerSlice{i, params.dt, 2.0 * params.lambda * params.a,
                                 2.0 * params.lambda * params.b,
                                 params.lambda / params.dt};
    }
    return slices;
}

double record_log_density(const NoisePath& record, const SystemState& state0,
                          const ModelParams& params) {
    params.validate();
    const auto [p_a, p_b] = branch_probabilities(state0);
    // Per-branch log density: Gaussian normalizers plus twice the branch log
    // amplitude (the quadratic exponent appears squared in the density).
    const double n = static_cast<double>(record.size());
    const double normalizer =
        -0.5 * n * std::log(2.0 * std::numbers::pi * params.lambda / params.dt);
    const double la = normalizer + 2.0 * branch_log_amplitude(record, params.a, params);
    const double lb = normalizer + 2.0 * branch_log_amplitude(record, params.b, params);
    const double lmax = std::max(la, lb);
    return lmax + std::log(p_a * std::exp(la - lmax) + p_b * std::exp(lb - lmax));
}

IndexedHistory sample_record(const SystemState& state0, std::size_t n_slices,
                             const ModelParams& params, RngStream rng) {
    params.validate();
    const SystemState s0 = state0.normalized_state();
    if (n_slices < 1) {
        throw std::invalid_argument("n_slices must be >= 1");
    }
    const double p_a = std::norm(s0.amp_a);
    const double branch = rng.uniform() < p_a ? params.a : params.b;
    const double mean = 2.0 * params.lambda * branch;
    const double sd = std::sqrt(params.lambda / params.dt);
    std::vector<double> w(n_slices);
    for (std::size_t i = 0; i < n_slices; ++i) {
        w[i] = rng.gaussian(mean, sd);
    }
    NoisePath record(params.dt, std::move(w));
    const double log_density = record_log_density(record, s0, params);
    SystemState conditioned = evolve_csl(s0, record, params).state;
    return IndexedHistory{std::move(record), conditioned, log_density};
}

}  // namespace collapse

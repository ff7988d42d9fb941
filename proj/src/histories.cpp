#include "collapse/histories.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "collapse/bath.hpp"
#include "collapse/errors.hpp"
#include "collapse/noise.hpp"

namespace collapse {

void HistorySpec::validate() const {
    if (!(projector_time >= 0.0) || !(final_time >= projector_time) ||
        !std::isfinite(final_time)) {
        throw std::invalid_argument("need 0 <= projector_time <= final_time, finite");
    }
    if (reversal) {
        if (reversal->start != final_time) {
            throw std::invalid_argument("reversal segment must start at final_time");
        }
        if (!(reversal->duration >= 0.0) || !std::isfinite(reversal->duration)) {
            throw std::invalid_argument("reversal duration must be nonnegative and finite");
        }
    }
}

namespace {

double probe_branch_product(const HistorySpec& spec, const SystemState& state0) {
    const SystemState s0 = state0.normalized_state();
    return std::abs(spec.probe.mu) * std::abs(spec.probe.nu) * std::abs(s0.amp_a) *
           std::abs(s0.amp_b);
}

}  // namespace

double decoherence_offdiag(const HistorySpec& spec, const SystemState& state0,
                           const ModelParams& params) {
    spec.validate();
    params.validate();
    if (spec.reversal) {
        throw std::invalid_argument(
            "spec carries a reversal segment; use decoherence_offdiag_with_reversal");
    }
    const double gap = params.a - params.b;
    const double damp = std::exp(-0.5 * params.lambda * spec.final_time * gap * gap);
    return probe_branch_product(spec, state0) * damp;
}

bool decoherence_condition(double value, double limit) {
    if (!(limit > 0.0) || !std::isfinite(limit)) {
        throw std::invalid_argument("limit must be positive and finite");
    }
    return value <= limit;
}

double decoherence_offdiag_with_reversal(const HistorySpec& spec,
                                         const SystemState& state0,
                                         const ModelParams& params) {
    spec.validate();
    params.validate();
    if (!spec.reversal) {
        throw std::invalid_argument("spec lacks the reversal segment");
    }
    const double tol = 1e-12 * std::max(1.0, spec.final_time);
    if (std::fabs(spec.reversal->duration - spec.final_time) > tol) {
        throw std::invalid_argument("reversal duration must equal final_time");
    }
    if (spec.final_time == 0.0) {
        return probe_branch_product(spec, state0);
    }
    BathRegister reg = init_bath(step_count(spec.final_time, params.dt), params);
    reg = reverse_pass(reflect(forward_pass(std::move(reg), params)), params);
    const double overlap = std::abs(branch_overlap(reg, params));
    return probe_branch_product(spec, state0) * overlap;
}

}  // namespace collapse

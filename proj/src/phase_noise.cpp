#include "collapse/phase_noise.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "collapse/errors.hpp"
#include "collapse/stats.hpp"

namespace collapse {

PhaseTrajectory evolve_phase(const SystemState& state0, const NoisePath& path,
                             const ModelParams& params) {
    params.validate();
    const SystemState s0 = state0.normalized_state();
    const double B = integrate_path(path);
    const SystemState rotated{s0.amp_a * std::polar(1.0, -B * params.a),
                              s0.amp_b * std::polar(1.0, -B * params.b), true};
    return PhaseTrajectory{path, rotated};
}

DensityMatrix2 ensemble_rho_phase(double horizon, const SystemState& state0,
                                  const ModelParams& params) {
    return analytic_rho(horizon, state0, params);
}

EnsembleRho ensemble_rho_phase_mc(std::size_t n_trials, double horizon,
                                  const SystemState& state0, const ModelParams& params,
                                  const RngStream& base, ExecPolicy policy) {
    params.validate();
    const SystemState s0 = state0.normalized_state();
    if (n_trials < 100) {
        throw std::invalid_argument("n_trials must be >= 100 for a meaningful SE");
    }
    if (horizon < 0.0 || !std::isfinite(horizon)) {
        throw BadHorizon("horizon must be nonnegative and finite");
    }
    if (std::llround(horizon / params.dt) == 0) {
        return EnsembleRho{DensityMatrix2::pure(s0), Mat2{}, n_trials};
    }

    std::vector<double> p_a(n_trials), p_b(n_trials), re_ab(n_trials), im_ab(n_trials);
    for_each_trial(n_trials, policy, [&](std::size_t i) {
        RngStream rng = base.stream(i);
        const NoisePath path = sample_raw_path(params, horizon, rng);
        const PhaseTrajectory t = evolve_phase(s0, path, params);
        p_a[i] = std::norm(t.state.amp_a);
        p_b[i] = std::norm(t.state.amp_b);
        const Complex cross = t.state.amp_a * std::conj(t.state.amp_b);
        re_ab[i] = cross.real();
        im_ab[i] = cross.imag();
    });

    RunningStats sa, sb, sre, sim;
    for (std::size_t i = 0; i < n_trials; ++i) {
        sa.add(p_a[i]);
        sb.add(p_b[i]);
        sre.add(re_ab[i]);
        sim.add(im_ab[i]);
    }
    const Complex ab{sre.mean, sim.mean};
    DensityMatrix2 rho{sa.mean, ab, std::conj(ab), sb.mean};
    Mat2 se;
    se.aa = Complex(sa.stderr_mean(), 0.0);
    se.bb = Complex(sb.stderr_mean(), 0.0);
    se.ab = Complex(sre.stderr_mean(), sim.stderr_mean());
    se.ba = se.ab;
    return EnsembleRho{rho, se, n_trials};
}

double interference_probability(const SystemState& state0, const ProbeState& probe,
                                double horizon, const ModelParams& params) {
    params.validate();
    if (horizon < 0.0 || !std::isfinite(horizon)) {
        throw BadHorizon("horizon must be nonnegative and finite");
    }
    const SystemState s0 = state0.normalized_state();
    const double gap = params.a - params.b;
    const double damp = std::exp(-0.5 * params.lambda * horizon * gap * gap);
    const Complex cross = s0.amp_a * std::conj(s0.amp_b) * std::conj(probe.mu) * probe.nu;
    return std::norm(s0.amp_a) * std::norm(probe.mu) +
           std::norm(s0.amp_b) * std::norm(probe.nu) + 2.0 * cross.real() * damp;
}

double nowen_time(const SystemState& state0, const ProbeState& probe,
                  const ModelParams& params, double epsilon) {
    params.validate();
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be positive and finite");
    }
    const SystemState s0 = state0.normalized_state();
    const Complex term = s0.amp_a * std::conj(s0.amp_b) * std::conj(probe.mu) * probe.nu;
    const double cross = std::abs(2.0 * term.real());
    if (cross <= epsilon) return 0.0;
    const double gap = params.a - params.b;
    if (gap == 0.0) {
        throw DegenerateEigenvalues("a == b: interference never decays below epsilon");
    }
    return 2.0 * std::log(cross / epsilon) / (params.lambda * gap * gap);
}

}  // namespace collapse

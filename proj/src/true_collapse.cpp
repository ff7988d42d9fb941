#include "collapse/true_collapse.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "collapse/errors.hpp"
#include "collapse/stats.hpp"

namespace collapse {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::A: return "a";
        case Outcome::B: return "b";
        default: return "undecided";
    }
}

double branch_log_amplitude(const NoisePath& path, double eigenvalue,
                            const ModelParams& params) {
    params.validate();
    const double target = 2.0 * params.lambda * eigenvalue;
    double sum = 0.0;
    for (double w : path.values()) {
        const double r = w - target;
        sum += r * r;
    }
    return -sum * path.dt() / (4.0 * params.lambda);
}

CslTrajectory evolve_csl(const SystemState& state0, const NoisePath& path,
                         const ModelParams& params) {
    const SystemState s0 = state0.normalized_state();
    const double la = branch_log_amplitude(path, params.a, params);
    const double lb = branch_log_amplitude(path, params.b, params);
    const double lmax = std::max(la, lb);
    const SystemState raw{s0.amp_a * std::exp(la - lmax), s0.amp_b * std::exp(lb - lmax)};
    const double log_norm_sq = 2.0 * lmax + std::log(raw.norm_sq());
    return CslTrajectory{path, raw.normalized_state(), log_norm_sq};
}

CslTrajectory sample_cooked_path(const SystemState& state0, const ModelParams& params,
                                 double horizon, RngStream rng) {
    params.validate();
    const SystemState s0 = state0.normalized_state();
    const std::size_t n = step_count(horizon, params.dt);
    const double p_a = std::norm(s0.amp_a);
    const double branch = rng.uniform() < p_a ? params.a : params.b;
    const double mean = 2.0 * params.lambda * branch;
    const double sd = std::sqrt(params.lambda / params.dt);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = rng.gaussian(mean, sd);
    }
    return evolve_csl(s0, NoisePath(params.dt, std::move(w)), params);
}

double marginal_B_density(double B, double horizon, const SystemState& state0,
                          const ModelParams& params) {
    params.validate();
    const auto [p_a, p_b] = branch_probabilities(state0);
    const double var = params.lambda * horizon;
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
    const auto gauss = [&](double mean) {
        const double z = B - mean;
        return norm * std::exp(-0.5 * z * z / var);
    };
    return p_a * gauss(2.0 * params.lambda * params.a * horizon) +
           p_b * gauss(2.0 * params.lambda * params.b * horizon);
}

double marginal_B_cdf(double B, double horizon, const SystemState& state0,
                      const ModelParams& params) {
    params.validate();
    const auto [p_a, p_b] = branch_probabilities(state0);
    const double sd = std::sqrt(params.lambda * horizon);
    return p_a * normal_cdf(B, 2.0 * params.lambda * params.a * horizon, sd) +
           p_b * normal_cdf(B, 2.0 * params.lambda * params.b * horizon, sd);
}

Outcome collapse_outcome(const CslTrajectory& trajectory, double threshold) {
    if (!(threshold > 0.0) || !(threshold < 0.5)) {
        throw BadThreshold("threshold must lie in (0, 0.5)");
    }
    const auto [p_a, p_b] = branch_probabilities(trajectory.state);
    if (p_b < threshold) return Outcome::A;
    if (p_a < threshold) return Outcome::B;
    return Outcome::Undecided;
}

DensityMatrix2 analytic_rho(double horizon, const SystemState& state0,
                            const ModelParams& params) {
    params.validate();
    if (horizon < 0.0 || !std::isfinite(horizon)) {
        throw BadHorizon("horizon must be nonnegative and finite");
    }
    const SystemState s0 = state0.normalized_state();
    const double gap = params.a - params.b;
    const double damp = std::exp(-0.5 * params.lambda * horizon * gap * gap);
    const Complex cross = s0.amp_a * std::conj(s0.amp_b) * damp;
    return DensityMatrix2{std::norm(s0.amp_a), cross, std::conj(cross), std::norm(s0.amp_b)};
}

EnsembleRho ensemble_rho_mc(std::size_t n_trials, double horizon,
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
        const CslTrajectory t = sample_cooked_path(s0, params, horizon, base.stream(i));
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

double raw_importance_log_weight(const CslTrajectory& trajectory,
                                 const ModelParams& params) {
    return trajectory.log_norm_sq -
           2.0 * branch_log_amplitude(trajectory.path, 0.0, params);
}

}  // namespace collapse

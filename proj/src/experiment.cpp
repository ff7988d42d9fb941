#include "collapse/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"

#include "collapse/bath.hpp"
#include "collapse/errors.hpp"
#include "collapse/histories.hpp"
#include "collapse/index_model.hpp"
#include "collapse/noise.hpp"
#include "collapse/phase_noise.hpp"
#include "collapse/stats.hpp"
#include "collapse/true_collapse.hpp"

namespace fs = std::filesystem;

namespace collapse {

namespace {

constexpr double kOutcomeThreshold = 1e-12;

const char* kModelNames[] = {"true_collapse", "phase_noise", "bath",   "recohere",
                             "histories",     "index",       "compare"};

}  // namespace

ModelKind model_from_string(const std::string& name) {
    for (std::size_t i = 0; i < std::size(kModelNames); ++i) {
        if (name == kModelNames[i]) return static_cast<ModelKind>(i);
    }
    throw ConfigError("model", "unknown model '" + name + "'");
}

const char* to_string(ModelKind kind) {
    return kModelNames[static_cast<std::size_t>(kind)];
}

namespace {

Complex parse_complex(const nlohmann::json& v, const std::string& path) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return Complex(v[0].get<double>(), v[1].get<double>());
    }
    throw ConfigError(path, "expected a number or [re, im]");
}

double parse_number(const nlohmann::json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", source + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("", source + ": config root must be an object");

    ExperimentConfig cfg;
    if (j.contains("model")) {
        if (!j["model"].is_string()) throw ConfigError("model", "expected a string");
        cfg.model = model_from_string(j["model"].get<std::string>());
    }
    if (j.contains("params")) {
        const auto& p = j["params"];
        if (!p.is_object()) throw ConfigError("params", "expected an object");
        if (p.contains("lambda")) cfg.params.lambda = parse_number(p["lambda"], "params.lambda");
        if (p.contains("a")) cfg.params.a = parse_number(p["a"], "params.a");
        if (p.contains("b")) cfg.params.b = parse_number(p["b"], "params.b");
        if (p.contains("dt")) cfg.params.dt = parse_number(p["dt"], "params.dt");
        if (p.contains("seed")) {
            const auto& s = p["seed"];
            if (!s.is_number_integer()) throw ConfigError("params.seed", "expected an integer");
            if (!s.is_number_unsigned() && s.get<long long>() < 0) {
                throw ConfigError("params.seed", "must be nonnegative");
            }
            cfg.params.seed = s.get<std::uint64_t>();
            cfg.seed_set = true;
        }
    }
    if (j.contains("alpha")) cfg.alpha = parse_complex(j["alpha"], "alpha");
    if (j.contains("beta")) cfg.beta = parse_complex(j["beta"], "beta");
    if (j.contains("mu")) cfg.mu = parse_complex(j["mu"], "mu");
    if (j.contains("nu")) cfg.nu = parse_complex(j["nu"], "nu");
    if (j.contains("horizon")) cfg.horizon = parse_number(j["horizon"], "horizon");
    if (j.contains("n_trials")) {
        if (!j["n_trials"].is_number_integer()) {
            throw ConfigError("n_trials", "expected an integer");
        }
        cfg.n_trials = j["n_trials"].get<long long>();
    }
    if (j.contains("epsilon")) cfg.epsilon = parse_number(j["epsilon"], "epsilon");
    if (j.contains("limit")) cfg.limit = parse_number(j["limit"], "limit");
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("execution")) {
        if (!j["execution"].is_string()) throw ConfigError("execution", "expected a string");
        const std::string mode = j["execution"].get<std::string>();
        if (mode == "serial") {
            cfg.policy = ExecPolicy::Serial;
        } else if (mode == "parallel") {
            cfg.policy = ExecPolicy::Parallel;
        } else {
            throw ConfigError("execution", "expected \"serial\" or \"parallel\"");
        }
    }
    return cfg;
}

std::vector<Diagnostic> validate(const ExperimentConfig& config) {
    std::vector<Diagnostic> out;
    const auto flag = [&](const char* field, const char* message) {
        out.push_back({field, message});
    };
    const ModelParams& p = config.params;
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
        flag("params.lambda", "must be positive and finite");
    }
    if (!(p.dt > 0.0) || !std::isfinite(p.dt)) {
        flag("params.dt", "must be positive and finite");
    }
    if (!std::isfinite(p.a)) flag("params.a", "must be finite");
    if (!std::isfinite(p.b)) flag("params.b", "must be finite");
    if (!config.seed_set) flag("params.seed", "required; there is no wall-clock default");
    if (std::norm(config.alpha) + std::norm(config.beta) <= 0.0) {
        flag("alpha", "alpha and beta cannot both be zero");
    }
    if (std::norm(config.mu) + std::norm(config.nu) <= 0.0) {
        flag("mu", "mu and nu cannot both be zero");
    }
    if (!std::isfinite(config.horizon)) {
        flag("horizon", "must be finite");
    } else if (p.dt > 0.0 && std::isfinite(p.dt) && config.horizon / p.dt < 1.0 - 1e-9) {
        flag("horizon", "shorter than one time step dt");
    }
    if (config.n_trials < 1) flag("n_trials", "must be >= 1");
    if (config.model == ModelKind::PhaseNoise) {
        if (!config.epsilon) {
            flag("epsilon", "required for phase_noise");
        } else if (!(*config.epsilon > 0.0) || !std::isfinite(*config.epsilon)) {
            flag("epsilon", "must be positive and finite");
        }
        if (p.a == p.b) {
            flag("params.b", "a == b leaves no finite interference-suppression time");
        }
    }
    if (config.model == ModelKind::Histories) {
        if (!config.limit) {
            flag("limit", "required for histories; there is no default");
        } else if (!(*config.limit > 0.0) || !std::isfinite(*config.limit)) {
            flag("limit", "must be positive and finite");
        }
    }
    if (config.output_dir.empty()) flag("output_dir", "required");
    return out;
}

namespace {

JsonValue complex_json(Complex c) {
    JsonValue a = JsonValue::array();
    a.push_back(c.real());
    a.push_back(c.imag());
    return a;
}

JsonValue rho_json(const DensityMatrix2& r) {
    JsonValue j = JsonValue::object();
    j["aa"] = complex_json(r.aa);
    j["ab"] = complex_json(r.ab);
    j["ba"] = complex_json(r.ba);
    j["bb"] = complex_json(r.bb);
    return j;
}

JsonValue mat2_json(const Mat2& m) {
    JsonValue j = JsonValue::object();
    j["aa"] = complex_json(m.aa);
    j["ab"] = complex_json(m.ab);
    j["ba"] = complex_json(m.ba);
    j["bb"] = complex_json(m.bb);
    return j;
}

// Standard error of |mean| by the delta method.
double abs_se(Complex mean, Complex se) {
    const double m = std::abs(mean);
    if (m == 0.0) return std::max(se.real(), se.imag());
    const double v = mean.real() * se.real() * mean.real() * se.real() +
                     mean.imag() * se.imag() * mean.imag() * se.imag();
    return std::sqrt(v) / m;
}

struct CookedEnsemble {
    DensityMatrix2 rho;
    Mat2 se;
    std::vector<double> B, p_a, p_b, log_w;
    std::vector<Outcome> outcomes;
    std::size_t count_a = 0, count_b = 0, count_undecided = 0;
    RunningStats B_stats;
};

CookedEnsemble run_cooked_trials(const SystemState& s0, const ModelParams& params,
                                 double horizon, std::size_t n, const RngStream& base,
                                 ExecPolicy policy, double threshold) {
    CookedEnsemble e;
    e.B.resize(n);
    e.p_a.resize(n);
    e.p_b.resize(n);
    e.log_w.resize(n);
    e.outcomes.resize(n);
    std::vector<double> re(n), im(n);
    for_each_trial(n, policy, [&](std::size_t i) {
        const CslTrajectory t = sample_cooked_path(s0, params, horizon, base.stream(i));
        e.B[i] = integrate_path(t.path);
        e.p_a[i] = std::norm(t.state.amp_a);
        e.p_b[i] = std::norm(t.state.amp_b);
        const Complex cross = t.state.amp_a * std::conj(t.state.amp_b);
        re[i] = cross.real();
        im[i] = cross.imag();
        e.log_w[i] = t.log_norm_sq;
        e.outcomes[i] = collapse_outcome(t, threshold);
    });
    RunningStats sa, sb, sre, sim;
    for (std::size_t i = 0; i < n; ++i) {
        sa.add(e.p_a[i]);
        sb.add(e.p_b[i]);
        sre.add(re[i]);
        sim.add(im[i]);
        e.B_stats.add(e.B[i]);
        switch (e.outcomes[i]) {
            case Outcome::A: ++e.count_a; break;
            case Outcome::B: ++e.count_b; break;
            case Outcome::Undecided: ++e.count_undecided; break;
        }
    }
    const Complex ab{sre.mean, sim.mean};
    e.rho = DensityMatrix2{sa.mean, ab, std::conj(ab), sb.mean};
    e.se.aa = Complex(sa.stderr_mean(), 0.0);
    e.se.bb = Complex(sb.stderr_mean(), 0.0);
    e.se.ab = Complex(sre.stderr_mean(), sim.stderr_mean());
    e.se.ba = e.se.ab;
    return e;
}

struct PhaseEnsemble {
    DensityMatrix2 rho;
    Mat2 se;
    std::vector<double> B, p_a, re_ab, im_ab;
    double max_prob_deviation = 0.0;
    RunningStats interference;
};

PhaseEnsemble run_phase_trials(const SystemState& s0, const ModelParams& params,
                               double horizon, std::size_t n, const RngStream& base,
                               ExecPolicy policy, const ProbeState& probe) {
    PhaseEnsemble e;
    e.B.resize(n);
    e.p_a.resize(n);
    e.re_ab.resize(n);
    e.im_ab.resize(n);
    std::vector<double> p_b(n), dev(n), fire(n);
    const double p_a0 = std::norm(s0.amp_a);
    const double p_b0 = std::norm(s0.amp_b);
    for_each_trial(n, policy, [&](std::size_t i) {
        RngStream rng = base.stream(i);
        const NoisePath path = sample_raw_path(params, horizon, rng);
        const PhaseTrajectory t = evolve_phase(s0, path, params);
        e.B[i] = integrate_path(path);
        e.p_a[i] = std::norm(t.state.amp_a);
        p_b[i] = std::norm(t.state.amp_b);
        const Complex cross = t.state.amp_a * std::conj(t.state.amp_b);
        e.re_ab[i] = cross.real();
        e.im_ab[i] = cross.imag();
        dev[i] = std::max(std::fabs(e.p_a[i] - p_a0), std::fabs(p_b[i] - p_b0));
        const Complex amp = std::conj(probe.mu) * t.state.amp_a +
                            std::conj(probe.nu) * t.state.amp_b;
        fire[i] = std::norm(amp);
    });
    RunningStats sa, sb, sre, sim;
    for (std::size_t i = 0; i < n; ++i) {
        sa.add(e.p_a[i]);
        sb.add(p_b[i]);
        sre.add(e.re_ab[i]);
        sim.add(e.im_ab[i]);
        e.interference.add(fire[i]);
        e.max_prob_deviation = std::max(e.max_prob_deviation, dev[i]);
    }
    const Complex ab{sre.mean, sim.mean};
    e.rho = DensityMatrix2{sa.mean, ab, std::conj(ab), sb.mean};
    e.se.aa = Complex(sa.stderr_mean(), 0.0);
    e.se.bb = Complex(sb.stderr_mean(), 0.0);
    e.se.ab = Complex(sre.stderr_mean(), sim.stderr_mean());
    e.se.ba = e.se.ab;
    return e;
}

struct IndexEnsemble {
    std::vector<double> B, p_a, p_b, log_density;
    NoisePath first_record{1.0, {0.0}};
    RunningStats B_stats;
    std::size_t count_a = 0, count_b = 0, count_undecided = 0;
};

IndexEnsemble run_index_trials(const SystemState& s0, const ModelParams& params,
                               std::size_t n_slices, std::size_t n,
                               const RngStream& base, ExecPolicy policy) {
    IndexEnsemble e;
    e.B.resize(n);
    e.p_a.resize(n);
    e.p_b.resize(n);
    e.log_density.resize(n);
    std::vector<double> first_values;
    for_each_trial(n, policy, [&](std::size_t i) {
        const IndexedHistory h = sample_record(s0, n_slices, params, base.stream(i));
        e.B[i] = integrate_path(h.record);
        e.p_a[i] = std::norm(h.conditioned_state.amp_a);
        e.p_b[i] = std::norm(h.conditioned_state.amp_b);
        e.log_density[i] = h.record_log_density;
        if (i == 0) first_values = h.record.values();
    });
    e.first_record = NoisePath(params.dt, std::move(first_values));
    for (std::size_t i = 0; i < n; ++i) {
        e.B_stats.add(e.B[i]);
        if (e.p_b[i] < kOutcomeThreshold) {
            ++e.count_a;
        } else if (e.p_a[i] < kOutcomeThreshold) {
            ++e.count_b;
        } else {
            ++e.count_undecided;
        }
    }
    return e;
}

std::string histogram_csv(const std::vector<double>& samples,
                          const SystemState& s0, const ModelParams& params,
                          double horizon, const char* mc_column) {
    const double sd = std::sqrt(params.lambda * horizon);
    const double m1 = 2.0 * params.lambda * params.a * horizon;
    const double m2 = 2.0 * params.lambda * params.b * horizon;
    const double lo = std::min(m1, m2) - 4.0 * sd;
    const double hi = std::max(m1, m2) + 4.0 * sd;
    constexpr int bins = 100;
    const double width = (hi - lo) / bins;
    std::vector<std::size_t> counts(bins, 0);
    for (double b : samples) {
        const int k = static_cast<int>(std::floor((b - lo) / width));
        if (k >= 0 && k < bins) ++counts[static_cast<std::size_t>(k)];
    }
    const double scale = 1.0 / (static_cast<double>(samples.size()) * width);
    std::string csv = std::string("B,analytic_density,") + mc_column + "\n";
    for (int k = 0; k < bins; ++k) {
        const double center = lo + width * (k + 0.5);
        csv += format_double(center) + "," +
               format_double(marginal_B_density(center, horizon, s0, params)) + "," +
               format_double(static_cast<double>(counts[static_cast<std::size_t>(k)]) * scale) +
               "\n";
    }
    return csv;
}

JsonValue config_block(const ExperimentConfig& cfg, std::size_t n_steps) {
    JsonValue j = JsonValue::object();
    j["model"] = to_string(cfg.model);
    JsonValue p = JsonValue::object();
    p["lambda"] = cfg.params.lambda;
    p["a"] = cfg.params.a;
    p["b"] = cfg.params.b;
    p["dt"] = cfg.params.dt;
    p["seed"] = static_cast<long long>(cfg.params.seed);
    j["params"] = p;
    j["alpha"] = complex_json(cfg.alpha);
    j["beta"] = complex_json(cfg.beta);
    j["mu"] = complex_json(cfg.mu);
    j["nu"] = complex_json(cfg.nu);
    j["horizon"] = cfg.horizon;
    j["n_steps"] = n_steps;
    j["effective_horizon"] = static_cast<double>(n_steps) * cfg.params.dt;
    j["n_trials"] = cfg.n_trials;
    if (cfg.epsilon) j["epsilon"] = *cfg.epsilon;
    if (cfg.limit) j["limit"] = *cfg.limit;
    j["execution"] = cfg.policy == ExecPolicy::Parallel ? "parallel" : "serial";
    return j;
}

JsonValue outcome_counts_json(std::size_t a, std::size_t b, std::size_t undecided) {
    JsonValue j = JsonValue::object();
    j["a"] = a;
    j["b"] = b;
    j["undecided"] = undecided;
    return j;
}

void run_true_collapse(const ExperimentConfig& cfg, const SystemState& s0,
                       double eff_horizon, const RngStream& base, JsonValue& results,
                       std::string& trials_csv, std::string& density_csv) {
    const auto n = static_cast<std::size_t>(cfg.n_trials);
    const CookedEnsemble e = run_cooked_trials(s0, cfg.params, eff_horizon, n, base,
                                               cfg.policy, kOutcomeThreshold);

    results["analytic_rho"] = rho_json(analytic_rho(eff_horizon, s0, cfg.params));
    results["mc_rho"] = rho_json(e.rho);
    results["mc_se"] = mat2_json(e.se);
    results["outcome_threshold"] = kOutcomeThreshold;
    results["outcome_counts"] = outcome_counts_json(e.count_a, e.count_b, e.count_undecided);
    const std::size_t decided = e.count_a + e.count_b;
    results["born_fraction_decided"] =
        decided == 0 ? JsonValue{}
                     : JsonValue(static_cast<double>(e.count_a) / static_cast<double>(decided));
    results["undecided_fraction"] =
        static_cast<double>(e.count_undecided) / static_cast<double>(n);
    results["born_probability_a"] = std::norm(s0.amp_a);
    results["mean_B"] = e.B_stats.mean;
    results["se_B"] = e.B_stats.stderr_mean();
    results["analytic_mean_B"] = 2.0 * cfg.params.lambda * eff_horizon *
                                 (std::norm(s0.amp_a) * cfg.params.a +
                                  std::norm(s0.amp_b) * cfg.params.b);

    trials_csv = "trial_id,B_T,p_a,outcome,log_norm_sq\n";
    for (std::size_t i = 0; i < n; ++i) {
        trials_csv += std::to_string(i) + "," + format_double(e.B[i]) + "," +
                      format_double(e.p_a[i]) + "," + to_string(e.outcomes[i]) + "," +
                      format_double(e.log_w[i]) + "\n";
    }
    density_csv = histogram_csv(e.B, s0, cfg.params, eff_horizon, "mc_density");
}

void run_phase_noise(const ExperimentConfig& cfg, const SystemState& s0,
                     double eff_horizon, const RngStream& base, JsonValue& results,
                     std::string& trials_csv, std::string& density_csv) {
    const auto n = static_cast<std::size_t>(cfg.n_trials);
    const ProbeState probe(cfg.mu, cfg.nu);
    const PhaseEnsemble e =
        run_phase_trials(s0, cfg.params, eff_horizon, n, base, cfg.policy, probe);

    results["analytic_rho"] = rho_json(ensemble_rho_phase(eff_horizon, s0, cfg.params));
    results["mc_rho"] = rho_json(e.rho);
    results["mc_se"] = mat2_json(e.se);
    results["max_branch_prob_deviation"] = e.max_prob_deviation;
    results["min_branch_product"] = std::abs(s0.amp_a) * std::abs(s0.amp_b);

    JsonValue interference = JsonValue::object();
    interference["analytic"] = interference_probability(s0, probe, eff_horizon, cfg.params);
    interference["mc"] = e.interference.mean;
    interference["mc_se"] = e.interference.stderr_mean();
    results["interference"] = interference;

    JsonValue nowen = JsonValue::object();
    nowen["epsilon"] = *cfg.epsilon;
    const double t_nowen = nowen_time(s0, probe, cfg.params, *cfg.epsilon);
    nowen["T_nowen"] = t_nowen;
    const Complex term =
        s0.amp_a * std::conj(s0.amp_b) * std::conj(probe.mu) * probe.nu;
    const double cross = std::abs(2.0 * term.real());
    const double gap = cfg.params.a - cfg.params.b;
    nowen["residual_at_T_nowen"] =
        cross * std::exp(-0.5 * cfg.params.lambda * t_nowen * gap * gap);
    nowen["residual_at_half_T_nowen"] =
        cross * std::exp(-0.25 * cfg.params.lambda * t_nowen * gap * gap);
    results["nowen"] = nowen;

    trials_csv = "trial_id,B_T,p_a,re_rho_ab,im_rho_ab\n";
    for (std::size_t i = 0; i < n; ++i) {
        trials_csv += std::to_string(i) + "," + format_double(e.B[i]) + "," +
                      format_double(e.p_a[i]) + "," + format_double(e.re_ab[i]) + "," +
                      format_double(e.im_ab[i]) + "\n";
    }

    // Off-diagonal decay curve over an 8-point horizon grid, fresh streams
    // per point.
    density_csv = "T,analytic_abs_rho_ab,mc_abs_rho_ab,stderr\n";
    const RngStream decay_base = base.stream(0x9e3779b9ULL);
    for (int k = 1; k <= 8; ++k) {
        const double t_k = eff_horizon * k / 8.0;
        const PhaseEnsemble ek = run_phase_trials(s0, cfg.params, t_k, n,
                                                  decay_base.stream(static_cast<std::uint64_t>(k)),
                                                  cfg.policy, probe);
        const double analytic =
            off_diagonal_magnitude(ensemble_rho_phase(t_k, s0, cfg.params));
        density_csv += format_double(t_k) + "," + format_double(analytic) + "," +
                       format_double(std::abs(ek.rho.ab)) + "," +
                       format_double(abs_se(ek.rho.ab, ek.se.ab)) + "\n";
    }
}

std::string mode_table_csv(const BathRegister& reg, bool with_stage, const char* stage) {
    std::string csv;
    for (const BathMode& m : reg.modes) {
        const double freq = (m.coeff_a - m.coeff_b) * m.dt;
        const double factor = std::exp(-0.5 * m.variance * freq * freq);
        if (with_stage) csv += std::string(stage) + ",";
        csv += std::to_string(m.index) + "," + format_double(m.coeff_a) + "," +
               format_double(m.coeff_b) + "," + format_double(factor) + "\n";
    }
    return csv;
}

void run_bath(const ExperimentConfig& cfg, const SystemState& s0, std::size_t n_modes,
              JsonValue& results, std::string& trials_csv, std::string& density_csv) {
    const BathRegister fresh = init_bath(n_modes, cfg.params);
    const BathRegister fwd = forward_pass(fresh, cfg.params);

    const double gap = cfg.params.a - cfg.params.b;
    const double horizon = static_cast<double>(n_modes) * cfg.params.dt;
    const double expected = std::exp(-0.5 * cfg.params.lambda * horizon * gap * gap);
    const Complex overlap = branch_overlap(fwd, cfg.params);
    const Complex oracle = grid_oracle_overlap(fwd, cfg.params, 8.0, 4096, cfg.policy);

    results["n_modes"] = n_modes;
    results["overlap_forward"] = complex_json(overlap);
    results["overlap_forward_oracle"] = complex_json(oracle);
    results["overlap_forward_expected"] = expected;
    results["reduced_rho"] = rho_json(reduced_rho(fwd, s0));
    results["abs_rho_ab"] = off_diagonal_magnitude(reduced_rho(fwd, s0));

    trials_csv = "mode_index,coeff_a,coeff_b,overlap_factor\n" +
                 mode_table_csv(fwd, false, "");
    density_csv = "stage,overlap,abs_rho_ab\n";
    density_csv += "initial,1," +
                   format_double(off_diagonal_magnitude(reduced_rho(fresh, s0))) + "\n";
    density_csv += "forward," + format_double(overlap.real()) + "," +
                   format_double(off_diagonal_magnitude(reduced_rho(fwd, s0))) + "\n";
}

void run_recohere(const ExperimentConfig& cfg, const SystemState& s0, std::size_t n_modes,
                  JsonValue& results, std::string& trials_csv, std::string& density_csv) {
    const BathRegister fresh = init_bath(n_modes, cfg.params);
    const BathRegister fwd = forward_pass(fresh, cfg.params);
    const BathRegister rev = reverse_pass(reflect(fwd), cfg.params);

    const Complex overlap_fwd = branch_overlap(fwd, cfg.params);
    const Complex overlap_rev = branch_overlap(rev, cfg.params);
    results["n_modes"] = n_modes;
    results["overlap_forward"] = complex_json(overlap_fwd);
    results["overlap_forward_oracle"] =
        complex_json(grid_oracle_overlap(fwd, cfg.params, 8.0, 4096, cfg.policy));
    results["overlap_after_reversal"] = complex_json(overlap_rev);
    results["overlap_after_reversal_oracle"] =
        complex_json(grid_oracle_overlap(rev, cfg.params, 8.0, 4096, cfg.policy));

    // The reversed branches live on the flipped labels, so the probe that
    // detects the surviving superposition is the initial state itself.
    const ProbeState detect(s0.amp_a, s0.amp_b);
    const double p_super = probe_expectation(reduced_rho(rev, s0), detect);
    const double p_mix = probe_expectation(DensityMatrix2::mixture(s0), detect);
    results["probe_superposition"] = p_super;
    results["probe_mixture"] = p_mix;
    results["probe_separation"] = p_super - p_mix;

    trials_csv = "stage,mode_index,coeff_a,coeff_b,overlap_factor\n";
    trials_csv += mode_table_csv(fwd, true, "forward");
    trials_csv += mode_table_csv(rev, true, "reversed");

    density_csv = "stage,overlap,abs_rho_ab\n";
    density_csv += "initial,1," +
                   format_double(off_diagonal_magnitude(reduced_rho(fresh, s0))) + "\n";
    density_csv += "forward," + format_double(overlap_fwd.real()) + "," +
                   format_double(off_diagonal_magnitude(reduced_rho(fwd, s0))) + "\n";
    density_csv += "reversed," + format_double(overlap_rev.real()) + "," +
                   format_double(off_diagonal_magnitude(reduced_rho(rev, s0))) + "\n";
}

void run_histories(const ExperimentConfig& cfg, const SystemState& s0,
                   double eff_horizon, JsonValue& results, std::string& trials_csv,
                   std::string& density_csv) {
    const ProbeState probe(cfg.mu, cfg.nu);
    JsonValue t_grid = JsonValue::array();
    JsonValue values = JsonValue::array();
    trials_csv = "projector_time,offdiag\n";
    double common_value = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double t = eff_horizon * j / 9.0;
        HistorySpec spec{t, eff_horizon, probe, std::nullopt};
        const double v = decoherence_offdiag(spec, s0, cfg.params);
        t_grid.push_back(t);
        values.push_back(v);
        trials_csv += format_double(t) + "," + format_double(v) + "\n";
        common_value = v;
    }
    results["T_grid"] = t_grid;
    results["offdiag_values"] = values;
    results["limit"] = *cfg.limit;
    results["condition_held"] = decoherence_condition(common_value, *cfg.limit);

    HistorySpec with_rev{0.0, eff_horizon, probe,
                         ReversalSegment{eff_horizon, eff_horizon}};
    const double rev_value = decoherence_offdiag_with_reversal(with_rev, s0, cfg.params);
    results["with_reversal_value"] = rev_value;
    results["condition_held_with_reversal"] = decoherence_condition(rev_value, *cfg.limit);

    density_csv = "final_time,offdiag\n";
    for (int j = 0; j <= 40; ++j) {
        const double t = eff_horizon * j / 40.0;
        HistorySpec spec{0.0, t, probe, std::nullopt};
        density_csv += format_double(t) + "," +
                       format_double(decoherence_offdiag(spec, s0, cfg.params)) + "\n";
    }
}

void run_index(const ExperimentConfig& cfg, const SystemState& s0, std::size_t n_steps,
               double eff_horizon, const RngStream& base, JsonValue& results,
               std::string& trials_csv, std::string& density_csv) {
    const auto n = static_cast<std::size_t>(cfg.n_trials);
    const IndexEnsemble e = run_index_trials(s0, cfg.params, n_steps, n, base, cfg.policy);

    results["n_slices"] = n_steps;
    results["mean_B"] = e.B_stats.mean;
    results["se_B"] = e.B_stats.stderr_mean();
    results["analytic_mean_B"] =
        2.0 * cfg.params.lambda * eff_horizon *
        (std::norm(s0.amp_a) * cfg.params.a + std::norm(s0.amp_b) * cfg.params.b);
    results["outcome_threshold"] = kOutcomeThreshold;
    results["outcome_counts"] = outcome_counts_json(e.count_a, e.count_b, e.count_undecided);

    const double ks = ks_one_sample_statistic(
        e.B, [&](double b) { return marginal_B_cdf(b, eff_horizon, s0, cfg.params); });
    results["ks_B_vs_marginal"] = ks;
    results["ks_critical_1pct"] =
        ks_critical_value(static_cast<double>(n), static_cast<double>(n)) /
        std::sqrt(2.0);

    // Slice-level trace of the first sampled record.
    trials_csv = "slice_index,w,B_running,p_a_running\n";
    const NoisePath& rec = e.first_record;
    for (std::size_t k = 1; k <= rec.size(); ++k) {
        const CslTrajectory t = evolve_csl(s0, rec.prefix(k), cfg.params);
        trials_csv += std::to_string(k - 1) + "," + format_double(rec.values()[k - 1]) +
                      "," + format_double(rec.cumulative()[k - 1]) + "," +
                      format_double(std::norm(t.state.amp_a)) + "\n";
    }
    density_csv = histogram_csv(e.B, s0, cfg.params, eff_horizon, "record_density");
}

void run_compare(const ExperimentConfig& cfg, const SystemState& s0, std::size_t n_steps,
                 double eff_horizon, const RngStream& base, JsonValue& results,
                 std::string& trials_csv, std::string& density_csv) {
    const auto n = static_cast<std::size_t>(cfg.n_trials);
    const DensityMatrix2 analytic = analytic_rho(eff_horizon, s0, cfg.params);
    const ProbeState probe(cfg.mu, cfg.nu);

    const CookedEnsemble truth = run_cooked_trials(
        s0, cfg.params, eff_horizon, n, base.stream(1), cfg.policy, kOutcomeThreshold);
    const PhaseEnsemble phase =
        run_phase_trials(s0, cfg.params, eff_horizon, n, base.stream(2), cfg.policy, probe);
    const IndexEnsemble index =
        run_index_trials(s0, cfg.params, n_steps, n, base.stream(3), cfg.policy);

    const BathRegister fwd = forward_pass(init_bath(n_steps, cfg.params), cfg.params);

    results["analytic_rho"] = rho_json(analytic);
    JsonValue truth_json = JsonValue::object();
    truth_json["rho"] = rho_json(truth.rho);
    truth_json["se"] = mat2_json(truth.se);
    truth_json["outcome_counts"] =
        outcome_counts_json(truth.count_a, truth.count_b, truth.count_undecided);
    const std::size_t decided = truth.count_a + truth.count_b;
    truth_json["born_fraction_decided"] =
        decided == 0 ? JsonValue{}
                     : JsonValue(static_cast<double>(truth.count_a) /
                                 static_cast<double>(decided));
    results["true_collapse"] = truth_json;

    JsonValue phase_json = JsonValue::object();
    phase_json["rho"] = rho_json(phase.rho);
    phase_json["se"] = mat2_json(phase.se);
    phase_json["max_branch_prob_deviation"] = phase.max_prob_deviation;
    phase_json["min_branch_product"] = std::abs(s0.amp_a) * std::abs(s0.amp_b);
    results["phase_noise"] = phase_json;

    JsonValue bath_json = JsonValue::object();
    bath_json["overlap_forward"] = complex_json(branch_overlap(fwd, cfg.params));
    bath_json["rho"] = rho_json(reduced_rho(fwd, s0));
    results["bath"] = bath_json;

    JsonValue index_json = JsonValue::object();
    index_json["mean_B"] = index.B_stats.mean;
    index_json["se_B"] = index.B_stats.stderr_mean();
    index_json["outcome_counts"] =
        outcome_counts_json(index.count_a, index.count_b, index.count_undecided);
    const double ks = ks_two_sample_statistic(index.B, truth.B);
    index_json["ks_B_vs_cooked"] = ks;
    index_json["ks_critical_1pct"] =
        ks_critical_value(static_cast<double>(n), static_cast<double>(n));
    results["index"] = index_json;

    // Largest |MC - analytic| across density-matrix entries, per model.
    const auto max_entry_gap = [&](const DensityMatrix2& mc) {
        return std::max(
            {std::abs(mc.aa - analytic.aa), std::abs(mc.ab - analytic.ab),
             std::abs(mc.ba - analytic.ba), std::abs(mc.bb - analytic.bb)});
    };
    JsonValue agreement = JsonValue::object();
    agreement["true_mc_max_abs_diff"] = max_entry_gap(truth.rho);
    agreement["phase_mc_max_abs_diff"] = max_entry_gap(phase.rho);
    agreement["bath_max_abs_diff"] = max_entry_gap(reduced_rho(fwd, s0));
    results["agreement"] = agreement;

    trials_csv = "model,trial_id,B_T,p_a\n";
    for (std::size_t i = 0; i < n; ++i) {
        trials_csv += "true_collapse," + std::to_string(i) + "," +
                      format_double(truth.B[i]) + "," + format_double(truth.p_a[i]) + "\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        trials_csv += "phase_noise," + std::to_string(i) + "," +
                      format_double(phase.B[i]) + "," + format_double(phase.p_a[i]) + "\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
        trials_csv += "index," + std::to_string(i) + "," + format_double(index.B[i]) +
                      "," + format_double(index.p_a[i]) + "\n";
    }

    const auto entry_row = [&](const char* name, Complex a, Complex t, Complex t_se,
                               Complex p, Complex p_se) {
        return std::string(name) + "," + format_double(a.real()) + "," +
               format_double(a.imag()) + "," + format_double(t.real()) + "," +
               format_double(t.imag()) + "," + format_double(t_se.real()) + "," +
               format_double(t_se.imag()) + "," + format_double(p.real()) + "," +
               format_double(p.imag()) + "," + format_double(p_se.real()) + "," +
               format_double(p_se.imag()) + "\n";
    };
    density_csv =
        "entry,analytic_re,analytic_im,true_re,true_im,true_se_re,true_se_im,"
        "phase_re,phase_im,phase_se_re,phase_se_im\n";
    density_csv += entry_row("aa", analytic.aa, truth.rho.aa, truth.se.aa, phase.rho.aa,
                             phase.se.aa);
    density_csv += entry_row("ab", analytic.ab, truth.rho.ab, truth.se.ab, phase.rho.ab,
                             phase.se.ab);
    density_csv += entry_row("ba", analytic.ba, truth.rho.ba, truth.se.ba, phase.rho.ba,
                             phase.se.ba);
    density_csv += entry_row("bb", analytic.bb, truth.rho.bb, truth.se.bb, phase.rho.bb,
                             phase.se.bb);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out.good()) throw IoError("write failed: " + path.string());
}

}  // namespace

ExperimentReport run(const ExperimentConfig& config) {
    const std::vector<Diagnostic> problems = validate(config);
    if (!problems.empty()) {
        throw ConfigError(problems.front().field, problems.front().message);
    }

    const SystemState s0 = make_superposition(config.alpha, config.beta);
    const std::size_t n_steps = step_count(config.horizon, config.params.dt);
    const double eff_horizon = static_cast<double>(n_steps) * config.params.dt;
    const RngStream base(config.params.seed, 0);

    JsonValue summary = config_block(config, n_steps);
    JsonValue results = JsonValue::object();
    std::string trials_csv, density_csv;

    switch (config.model) {
        case ModelKind::TrueCollapse:
            run_true_collapse(config, s0, eff_horizon, base, results, trials_csv,
                              density_csv);
            break;
        case ModelKind::PhaseNoise:
            run_phase_noise(config, s0, eff_horizon, base, results, trials_csv,
                            density_csv);
            break;
        case ModelKind::Bath:
            run_bath(config, s0, n_steps, results, trials_csv, density_csv);
            break;
        case ModelKind::Recohere:
            run_recohere(config, s0, n_steps, results, trials_csv, density_csv);
            break;
        case ModelKind::Histories:
            run_histories(config, s0, eff_horizon, results, trials_csv, density_csv);
            break;
        case ModelKind::Index:
            run_index(config, s0, n_steps, eff_horizon, base, results, trials_csv,
                      density_csv);
            break;
        case ModelKind::Compare:
            run_compare(config, s0, n_steps, eff_horizon, base, results, trials_csv,
                        density_csv);
            break;
    }
    summary["results"] = results;

    ExperimentReport report;
    report.summary = summary;
    const fs::path dir(config.output_dir);
    try {
        fs::create_directories(dir);
    } catch (const fs::filesystem_error& e) {
        throw IoError(std::string("cannot create output directory: ") + e.what());
    }
    report.summary_path = dir / "summary.json";
    report.trials_path = dir / "trials.csv";
    report.density_path = dir / "density.csv";
    write_file(report.summary_path, summary.dump());
    write_file(report.trials_path, trials_csv);
    write_file(report.density_path, density_csv);
    return report;
}

}  // namespace collapse

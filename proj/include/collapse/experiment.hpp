#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "collapse/ensemble.hpp"
#include "collapse/json_writer.hpp"
#include "collapse/quantum.hpp"

namespace collapse {

enum class ModelKind {
    TrueCollapse,
    PhaseNoise,
    Bath,
    Recohere,
    Histories,
    Index,
    Compare,
};

ModelKind model_from_string(const std::string& name);  // throws ConfigError
const char* to_string(ModelKind kind);

// One experiment, fully specified. Physics fields default to the standard
// symmetric setup (lambda=1, a=1, b=-1, dt=0.01, equal amplitudes and probe,
// horizon 1, 1e5 trials); the seed and output_dir never default.
struct ExperimentConfig {
    ModelKind model = ModelKind::Compare;
    ModelParams params;
    bool seed_set = false;
    Complex alpha{std::sqrt(0.5), 0.0};
    Complex beta{std::sqrt(0.5), 0.0};
    Complex mu{std::sqrt(0.5), 0.0};
    Complex nu{std::sqrt(0.5), 0.0};
    double horizon = 1.0;
    long long n_trials = 100000;
    std::optional<double> epsilon;  // required by phase_noise
    std::optional<double> limit;    // required by histories
    std::string output_dir;
    ExecPolicy policy = ExecPolicy::Parallel;
};

struct Diagnostic {
    std::string field;
    std::string message;
};

// Reads a JSON config. Unknown keys are ignored; type errors throw
// ConfigError with the field path. Field presence is checked by validate.
ExperimentConfig parse_config(const std::string& json_text, const std::string& source);

// Empty iff run would not raise ConfigError.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

struct ExperimentReport {
    JsonValue summary;
    std::filesystem::path summary_path;
    std::filesystem::path trials_path;
    std::filesystem::path density_path;
};

// Runs the configured experiment and writes output_dir/{summary.json,
// trials.csv, density.csv}. Identical configs produce byte-identical files.
ExperimentReport run(const ExperimentConfig& config);

}  // namespace collapse

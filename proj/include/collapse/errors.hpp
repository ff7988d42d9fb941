#pragma once

#include <stdexcept>
#include <string>

namespace collapse {

// Both input amplitudes were zero; no direction in Hilbert space.
struct ZeroState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A density matrix failed its trace/Hermiticity/positivity checks.
struct InvalidDensity : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested horizon is shorter than one time step.
struct BadHorizon : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Collapse decision threshold outside (0, 0.5).
struct BadThreshold : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// reverse_pass called on a register that is not in the reflected configuration.
struct ReflectRequired : std::logic_error {
    using std::logic_error::logic_error;
};

// a == b leaves the interference term constant; no finite suppression time.
struct DegenerateEigenvalues : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Overlap quadrature disagrees with its refined grid beyond tolerance.
struct GridTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_path, const std::string& message)
        : std::runtime_error(field_path.empty() ? message : field_path + ": " + message),
          field(std::move(field_path)) {}
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace collapse

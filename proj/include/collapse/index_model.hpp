#pragma once

#include <cstddef>
#include <vector>

#include "collapse/noise.hpp"
#include "collapse/quantum.hpp"
#include "collapse/rng.hpp"

namespace collapse {

// One pointer variable that interacted exactly once, during its own slice of
// duration dt, and never again. The interaction translates its Gaussian
// wavepacket (variance lambda/dt) to center 2 lambda e on branch e; there is
// no re-interaction operation, so the branch records stay orthogonal.
struct PointerSlice {
    std::size_t index = 0;
    double dt = 0.0;
    double center_a = 0.0;  // 2 lambda a
    double center_b = 0.0;  // 2 lambda b
    double variance = 0.0;  // lambda / dt
};

// A measured pointer record with the system state it labels.
struct IndexedHistory {
    NoisePath record;
    SystemState conditioned_state;  // the collapse-dynamics state for this record
    double record_log_density;
};

// Pointer slices after their one interaction each.
std::vector<PointerSlice> evolve_index(const SystemState& state0, std::size_t n_slices,
                                       const ModelParams& params);

// Log density of a record: log of |alpha|^2 g_a + |beta|^2 g_b, where g_e is
// the product of per-slice Gaussians centered at 2 lambda e. Integrates to 1
// over records; its B-marginal is marginal_B_density.
double record_log_density(const NoisePath& record, const SystemState& state0,
                          const ModelParams& params);

// Draws a record from record_log_density's law (branch pick with the Born
// weights, then Gaussian slices) and attaches the conditioned state.
IndexedHistory sample_record(const SystemState& state0, std::size_t n_slices,
                             const ModelParams& params, RngStream rng);

}  // namespace collapse

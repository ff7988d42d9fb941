#pragma once

#include <cstddef>

namespace collapse {

enum class ExecPolicy { Serial, Parallel };

// Runs body(trial) for every trial in [0, n_trials). Parallel uses OpenMP,
// Serial is the plain-loop reference kept for testing and benchmarking.
// Bodies must write only to their own per-trial slots; callers reduce those
// slots afterwards in fixed trial order, so results are bit-identical across
// policies and thread counts.
template <typename Body>
void for_each_trial(std::size_t n_trials, ExecPolicy policy, Body&& body) {
#ifdef _OPENMP
    if (policy == ExecPolicy::Parallel) {
        const auto n = static_cast<long long>(n_trials);
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < n; ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)policy;
#endif
    for (std::size_t i = 0; i < n_trials; ++i) {
        body(i);
    }
}

}  // namespace collapse

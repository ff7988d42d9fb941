#pragma once

#include <optional>

#include "collapse/quantum.hpp"

namespace collapse {

// A one-projector-pair history: branch projectors applied at projector_time,
// the probe experiment at final_time, optionally followed by a time-reversed
// environment segment starting at final_time.
struct ReversalSegment {
    double start = 0.0;
    double duration = 0.0;
};

struct HistorySpec {
    double projector_time = 0.0;
    double final_time = 0.0;
    ProbeState probe;
    std::optional<ReversalSegment> reversal;

    // Enforces 0 <= projector_time <= final_time and, when present,
    // reversal.start == final_time. Throws std::invalid_argument.
    void validate() const;
};

// Off-diagonal magnitude of the two-history functional:
// |mu nu alpha beta| times the environment branch overlap accumulated up to
// final_time. Independent of projector_time. Requires spec without reversal.
double decoherence_offdiag(const HistorySpec& spec, const SystemState& state0,
                           const ModelParams& params);

// true iff the off-diagonal magnitude is small enough to call the history
// pair decoherent under the prearranged limit (> 0, caller-supplied).
bool decoherence_condition(double value, double limit);

// Same functional when the environment is reflected and re-traversed for
// duration final_time: the overlap returns to 1 exactly, so the magnitude is
// the undamped |mu nu alpha beta|. Requires spec.reversal with
// duration == final_time. Evaluated through the bath bookkeeping rather than
// the closed form, as an independent route.
double decoherence_offdiag_with_reversal(const HistorySpec& spec,
                                         const SystemState& state0,
                                         const ModelParams& params);

}  // namespace collapse

#pragma once

#include "collapse/ensemble.hpp"
#include "collapse/noise.hpp"
#include "collapse/quantum.hpp"
#include "collapse/rng.hpp"
#include "collapse/true_collapse.hpp"

namespace collapse {

// Unitary counterpart of the collapse dynamics: the same noise record only
// rotates branch phases, so branch weights never move.
struct PhaseTrajectory {
    NoisePath path;
    SystemState state;  // norm preserved, still unit
};

// amp_e picks up the phase exp(-i B(T) e); nothing else changes.
PhaseTrajectory evolve_phase(const SystemState& state0, const NoisePath& path,
                             const ModelParams& params);

// Ensemble average over raw records, in closed form. Identical entrywise to
// analytic_rho: the two models share one density matrix.
DensityMatrix2 ensemble_rho_phase(double horizon, const SystemState& state0,
                                  const ModelParams& params);

// Monte Carlo flavor of ensemble_rho_phase, averaging projectors of evolved
// raw records. Trials use independent child streams of base.
EnsembleRho ensemble_rho_phase_mc(std::size_t n_trials, double horizon,
                                  const SystemState& state0, const ModelParams& params,
                                  const RngStream& base,
                                  ExecPolicy policy = ExecPolicy::Parallel);

// Probability that a probe measurement at the horizon fires:
// |amp_a mu|^2 + |amp_b nu|^2 plus a cross term damped by
// exp(-(lambda T / 2)(a - b)^2). Equals probe_expectation of
// ensemble_rho_phase with the same probe.
double interference_probability(const SystemState& state0, const ProbeState& probe,
                                double horizon, const ModelParams& params);

// Earliest horizon after which the interference term stays below epsilon:
// max(0, 2 ln(|cross| / epsilon) / (lambda (a - b)^2)) with
// cross = 2 Re{alpha conj(beta) conj(mu) nu}. Throws DegenerateEigenvalues
// when a == b and the bound can never be met.
double nowen_time(const SystemState& state0, const ProbeState& probe,
                  const ModelParams& params, double epsilon);

}  // namespace collapse

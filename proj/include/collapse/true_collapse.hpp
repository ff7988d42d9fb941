#pragma once

#include <cstddef>

#include "collapse/ensemble.hpp"
#include "collapse/noise.hpp"
#include "collapse/quantum.hpp"
#include "collapse/rng.hpp"

namespace collapse {

enum class Outcome { A, B, Undecided };

const char* to_string(Outcome outcome);

// State driven by one noise record, plus the log squared norm the
// normalization removed. The normalized state depends on the record only
// through B(T); the norm carries the rest.
struct CslTrajectory {
    NoisePath path;
    SystemState state;    // normalized
    double log_norm_sq;   // log <psi|psi> of the unnormalized solution
};

// Log amplitude factor a single branch of eigenvalue e picks up along the
// record: -(1/(4 lambda)) sum_n dt (w_n - 2 lambda e)^2.
double branch_log_amplitude(const NoisePath& path, double eigenvalue,
                            const ModelParams& params);

// Closed-form evolution of state0 along the record (collapse dynamics only,
// no Hamiltonian). Works in log space, so branch ratios survive arbitrarily
// long records.
CslTrajectory evolve_csl(const SystemState& state0, const NoisePath& path,
                         const ModelParams& params);

// Draws a record from the physical (norm-weighted) measure: branch e is
// picked with its Born probability, then w_n ~ Normal(2 lambda e, lambda/dt).
// This mixture is exactly the raw Gaussian measure reweighted by the squared
// norm of the evolved state.
CslTrajectory sample_cooked_path(const SystemState& state0, const ModelParams& params,
                                 double horizon, RngStream rng);

// Density and CDF of B(T) under the physical measure: a two-component
// Gaussian mixture with means 2 lambda e T and variance lambda T.
double marginal_B_density(double B, double horizon, const SystemState& state0,
                          const ModelParams& params);
double marginal_B_cdf(double B, double horizon, const SystemState& state0,
                      const ModelParams& params);

// A if the b-branch weight is below threshold, B if the a-branch weight is,
// Undecided otherwise. Threshold must lie in (0, 0.5).
Outcome collapse_outcome(const CslTrajectory& trajectory, double threshold);

// Ensemble average over the physical measure: diagonal preserved, off-diagonal
// damped by exp(-(lambda T / 2) (a - b)^2).
DensityMatrix2 analytic_rho(double horizon, const SystemState& state0,
                            const ModelParams& params);

// Entry-wise standard errors of a Monte Carlo density matrix.
struct Mat2 {
    Complex aa{0.0, 0.0};
    Complex ab{0.0, 0.0};
    Complex ba{0.0, 0.0};
    Complex bb{0.0, 0.0};
};

struct EnsembleRho {
    DensityMatrix2 rho;
    Mat2 se;
    std::size_t n_trials = 0;
};

// Mean projector over n_trials cooked records. Trials use independent child
// streams of base, so any execution order gives the same result; the horizon
// may be zero, in which case the pure state comes back with zero SE.
EnsembleRho ensemble_rho_mc(std::size_t n_trials, double horizon,
                            const SystemState& state0, const ModelParams& params,
                            const RngStream& base,
                            ExecPolicy policy = ExecPolicy::Parallel);

// Log likelihood ratio physical/raw for the trajectory's record; exp of it,
// averaged over raw records, is 1.
double raw_importance_log_weight(const CslTrajectory& trajectory,
                                 const ModelParams& params);

}  // namespace collapse

#pragma once

#include <cstddef>
#include <vector>

#include "collapse/ensemble.hpp"
#include "collapse/quantum.hpp"

namespace collapse {

// One environment particle. Its initial wavepacket is a centered Gaussian of
// variance lambda/dt; an interaction with branch e multiplies that branch's
// wavefunction by the phase exp(-i coeff_e w dt), with coeff_e accumulating
// the (signed) eigenvalue per visit. Gaussian-times-linear-phase is closed
// under this dynamics, so the coefficients are sufficient statistics.
struct BathMode {
    std::size_t index = 0;
    double dt = 0.0;
    double variance = 0.0;  // lambda / dt
    double coeff_a = 0.0;
    double coeff_b = 0.0;
};

struct InteractionRecord {
    std::size_t mode = 0;
    int sign = 0;  // +1 normal eigenvalues, -1 after reflection
};

// Value object; passes return new registers. eigen_sign == -1 marks the
// reflected configuration in which subsequent passes couple to (-a, -b).
struct BathRegister {
    std::vector<BathMode> modes;
    int eigen_sign = 1;
    std::vector<InteractionRecord> interaction_log;
};

// Fresh register of n_modes untouched modes, variance lambda/dt each.
BathRegister init_bath(std::size_t n_modes, const ModelParams& params);

// Visits every mode in order; each coeff_e gains eigen_sign * e.
BathRegister forward_pass(BathRegister reg, const ModelParams& params);

// Flips the sign the system eigenvalues enter subsequent passes with.
BathRegister reflect(BathRegister reg);

// Visits the last max_modes modes in reverse order while reflected, so each
// visited coeff_e gains -e and a once-forward-visited mode cancels exactly.
// Throws ReflectRequired unless the register is currently reflected.
BathRegister reverse_pass(BathRegister reg, const ModelParams& params);
BathRegister reverse_pass(BathRegister reg, const ModelParams& params,
                          std::size_t max_modes);

// Product over modes of E[exp(-i (coeff_a - coeff_b) dt w)] with
// w ~ Gaussian(0, variance): real, positive, in (0, 1].
Complex branch_overlap(const BathRegister& reg, const ModelParams& params);

// Independent check of branch_overlap: trapezoid quadrature of each mode's
// branch-wavefunction inner product on [-halfwidth_sigmas, +halfwidth_sigmas]
// standard deviations with grid_points points. Throws GridTooCoarse if
// doubling the grid moves the result by more than 1e-6.
Complex grid_oracle_overlap(const BathRegister& reg, const ModelParams& params,
                            double grid_halfwidth_sigmas = 8.0, int grid_points = 4096,
                            ExecPolicy policy = ExecPolicy::Parallel);

// Trace over the environment: diagonal of the pure system state, off-diagonal
// multiplied by the branch overlap.
DensityMatrix2 reduced_rho(const BathRegister& reg, const SystemState& state0);

}  // namespace collapse

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

namespace collapse {

using Complex = std::complex<double>;

// Two-branch state in the eigenbasis of the collapse operator A.
// amp_a multiplies the eigenvalue-a branch, amp_b the eigenvalue-b branch.
// Amplitudes may be stored unnormalized; the flag records whether the unit
// norm has been applied.
struct SystemState {
    Complex amp_a{0.0, 0.0};
    Complex amp_b{0.0, 0.0};
    bool normalized = false;

    double norm_sq() const;
    SystemState normalized_state() const;  // throws ZeroState if norm is zero
};

// Normalizes (alpha, beta); throws ZeroState if both vanish.
SystemState make_superposition(Complex alpha, Complex beta);

// (|amp_a|^2, |amp_b|^2) of the normalized state; sums to 1 within 1e-12.
std::pair<double, double> branch_probabilities(const SystemState& state);

// Measurement direction (mu, nu) in the same basis, normalized on construction.
struct ProbeState {
    Complex mu{1.0, 0.0};
    Complex nu{0.0, 0.0};

    ProbeState() = default;
    ProbeState(Complex mu_in, Complex nu_in);  // throws ZeroState
    ProbeState orthogonal() const;             // <orthogonal()|*this> == 0
};

// 2x2 density matrix in the collapse-operator eigenbasis.
struct DensityMatrix2 {
    Complex aa{0.0, 0.0};
    Complex ab{0.0, 0.0};
    Complex ba{0.0, 0.0};
    Complex bb{0.0, 0.0};

    static DensityMatrix2 pure(const SystemState& state);
    // Statistical mixture diag(|amp_a|^2, |amp_b|^2) of the same branches.
    static DensityMatrix2 mixture(const SystemState& state);

    double trace_real() const;
    // Eigenvalues of the Hermitian part, descending.
    std::array<double, 2> eigenvalues() const;
    // Throws InvalidDensity unless trace == 1 and Hermiticity hold within tol
    // and both eigenvalues are >= -tol.
    void validate(double tol = 1e-12) const;
};

// <probe| rho |probe>. Validates rho first (throws InvalidDensity).
double probe_expectation(const DensityMatrix2& rho, const ProbeState& probe);

double off_diagonal_magnitude(const DensityMatrix2& rho);

// Collapse model parameters: rate lambda, operator eigenvalues a and b,
// integration step dt, base RNG seed.
struct ModelParams {
    double lambda = 1.0;
    double a = 1.0;
    double b = -1.0;
    double dt = 0.01;
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument naming the field
};

}  // namespace collapse

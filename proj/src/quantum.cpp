#include "collapse/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "collapse/errors.hpp"

namespace collapse {

double SystemState::norm_sq() const {
    return std::norm(amp_a) + std::norm(amp_b);
}

SystemState SystemState::normalized_state() const {
    const double n2 = norm_sq();
    if (n2 <= 0.0 || !std::isfinite(n2)) {
        throw ZeroState("cannot normalize a zero-norm state");
    }
    const double inv = 1.0 / std::sqrt(n2);
    return SystemState{amp_a * inv, amp_b * inv, true};
}

SystemState make_superposition(Complex alpha, Complex beta) {
    return SystemState{alpha, beta, false}.normalized_state();
}

std::pair<double, double> branch_probabilities(const SystemState& state) {
    const SystemState s = state.normalized_state();
    return {std::norm(s.amp_a), std::norm(s.amp_b)};
}

ProbeState::ProbeState(Complex mu_in, Complex nu_in) {
    const double n2 = std::norm(mu_in) + std::norm(nu_in);
    if (n2 <= 0.0 || !std::isfinite(n2)) {
        throw ZeroState("cannot normalize a zero-norm probe");
    }
    const double inv = 1.0 / std::sqrt(n2);
    mu = mu_in * inv;
    nu = nu_in * inv;
}

ProbeState ProbeState::orthogonal() const {
    return ProbeState{std::conj(nu), -std::conj(mu)};
}

DensityMatrix2 DensityMatrix2::pure(const SystemState& state) {
    const SystemState s = state.normalized_state();
    return DensityMatrix2{std::norm(s.amp_a), s.amp_a * std::conj(s.amp_b),
                          s.amp_b * std::conj(s.amp_a), std::norm(s.amp_b)};
}

DensityMatrix2 DensityMatrix2::mixture(const SystemState& state) {
    const SystemState s = state.normalized_state();
    return DensityMatrix2{std::norm(s.amp_a), 0.0, 0.0, std::norm(s.amp_b)};
}

double DensityMatrix2::trace_real() const {
    return aa.real() + bb.real();
}

std::array<double, 2> DensityMatrix2::eigenvalues() const {
    // Hermitian part; exact for valid inputs, tolerant of MC rounding.
    const double daa = aa.real();
    const double dbb = bb.real();
    const Complex h = 0.5 * (ab + std::conj(ba));
    const double mid = 0.5 * (daa + dbb);
    const double disc = std::sqrt(0.25 * (daa - dbb) * (daa - dbb) + std::norm(h));
    return {mid + disc, mid - disc};
}

void DensityMatrix2::validate(double tol) const {
    if (std::abs(trace_real() - 1.0) > tol) {
        throw InvalidDensity("trace " + std::to_string(trace_real()) + " != 1");
    }
    if (std::abs(aa.imag()) > tol || std::abs(bb.imag()) > tol) {
        throw InvalidDensity("diagonal entries must be real");
    }
    if (std::abs(ab - std::conj(ba)) > tol) {
        throw InvalidDensity("off-diagonal entries are not conjugates");
    }
    const auto ev = eigenvalues();
    if (ev[1] < -tol) {
        throw InvalidDensity("negative eigenvalue " + std::to_string(ev[1]));
    }
}

double probe_expectation(const DensityMatrix2& rho, const ProbeState& probe) {
    rho.validate();
    const Complex m = std::conj(probe.mu);
    const Complex n = std::conj(probe.nu);
    const Complex value = m * rho.aa * probe.mu + m * rho.ab * probe.nu +
                          n * rho.ba * probe.mu + n * rho.bb * probe.nu;
    return value.real();
}

double off_diagonal_magnitude(const DensityMatrix2& rho) {
    return std::abs(rho.ab);
}

void ModelParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be positive and finite");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive and finite");
    }
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("a and b must be finite");
    }
}

}  // namespace collapse

#include "collapse/bath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "collapse/errors.hpp"

namespace collapse {

BathRegister init_bath(std::size_t n_modes, const ModelParams& params) {
    params.validate();
    if (n_modes < 1) {
        throw std::invalid_argument("n_modes must be >= 1");
    }
    BathRegister reg;
    reg.modes.resize(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        reg.modes[i] = BathMode{i, params.dt, params.lambda / params.dt, 0.0, 0.0};
    }
    return reg;
}

BathRegister forward_pass(BathRegister reg, const ModelParams& params) {
    params.validate();
    const double sign = reg.eigen_sign;
    for (BathMode& mode : reg.modes) {
        mode.coeff_a += sign * params.a;
        mode.coeff_b += sign * params.b;
        reg.interaction_log.push_back({mode.index, reg.eigen_sign});
    }
    return reg;
}

BathRegister reflect(BathRegister reg) {
    reg.eigen_sign = -reg.eigen_sign;
    return reg;
}

BathRegister reverse_pass(BathRegister reg, const ModelParams& params) {
    const std::size_t all = reg.modes.size();
    return reverse_pass(std::move(reg), params, all);
}

BathRegister reverse_pass(BathRegister reg, const ModelParams& params,
                          std::size_t max_modes) {
    params.validate();
    if (reg.eigen_sign != -1) {
        throw ReflectRequired("reverse_pass needs a reflected register");
    }
    const std::size_t count = std::min(max_modes, reg.modes.size());
    for (std::size_t k = 0; k < count; ++k) {
        BathMode& mode = reg.modes[reg.modes.size() - 1 - k];
        mode.coeff_a += reg.eigen_sign * params.a;
        mode.coeff_b += reg.eigen_sign * params.b;
        reg.interaction_log.push_back({mode.index, reg.eigen_sign});
    }
    return reg;
}

namespace {

// Log of one mode's overlap factor: characteristic function of its Gaussian
// at frequency (coeff_a - coeff_b) * dt.
double mode_log_factor(const BathMode& mode) {
    const double freq = (mode.coeff_a - mode.coeff_b) * mode.dt;
    return -0.5 * mode.variance * freq * freq;
}

}  // namespace

Complex branch_overlap(const BathRegister& reg, const ModelParams& params) {
    params.validate();
    // Summing exponents before the single exp keeps the product exact enough
    // for 1e-12 comparisons over hundreds of modes.
    double log_total = 0.0;
    for (const BathMode& mode : reg.modes) {
        log_total += mode_log_factor(mode);
    }
    return Complex(std::exp(log_total), 0.0);
}

Complex grid_oracle_overlap(const BathRegister& reg, const ModelParams& params,
                            double grid_halfwidth_sigmas, int grid_points,
                            ExecPolicy policy) {
    params.validate();
    if (grid_points < 256) {
        throw std::invalid_argument("grid_points must be >= 256");
    }
    if (!(grid_halfwidth_sigmas >= 6.0)) {
        throw std::invalid_argument("grid_halfwidth_sigmas must be >= 6");
    }

    // <branch_b|branch_a> for one mode: integral of the Gaussian probability
    // density times exp(-i (coeff_a - coeff_b) dt w).
    const auto mode_overlap = [&](const BathMode& mode, int points) {
        const double sigma = std::sqrt(mode.variance);
        const double half = grid_halfwidth_sigmas * sigma;
        const double h = 2.0 * half / (points - 1);
        const double freq = (mode.coeff_a - mode.coeff_b) * mode.dt;
        const double pdf_norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
        Complex sum{0.0, 0.0};
        for (int i = 0; i < points; ++i) {
            const double w = -half + h * i;
            const double pdf = pdf_norm * std::exp(-0.5 * w * w / mode.variance);
            const Complex term = pdf * std::polar(1.0, -freq * w);
            sum += (i == 0 || i == points - 1) ? 0.5 * term : term;
        }
        return sum * h;
    };

    std::vector<Complex> coarse(reg.modes.size()), fine(reg.modes.size());
    for_each_trial(reg.modes.size(), policy, [&](std::size_t i) {
        coarse[i] = mode_overlap(reg.modes[i], grid_points);
        fine[i] = mode_overlap(reg.modes[i], 2 * grid_points - 1);
    });

    Complex product{1.0, 0.0}, refined{1.0, 0.0};
    for (std::size_t i = 0; i < reg.modes.size(); ++i) {
        product *= coarse[i];
        refined *= fine[i];
    }
    if (std::abs(product - refined) > 1e-6) {
        throw GridTooCoarse("overlap quadrature unconverged; raise grid_points");
    }
    return product;
}

DensityMatrix2 reduced_rho(const BathRegister& reg, const SystemState& state0) {
    const SystemState s0 = state0.normalized_state();
    double log_total = 0.0;
    for (const BathMode& mode : reg.modes) {
        log_total += mode_log_factor(mode);
    }
    const double overlap = std::exp(log_total);
    const Complex cross = s0.amp_a * std::conj(s0.amp_b) * overlap;
    return DensityMatrix2{std::norm(s0.amp_a), cross, std::conj(cross), std::norm(s0.amp_b)};
}

}  // namespace collapse

// Times the Monte Carlo and quadrature kernels under the serial reference
// policy and the OpenMP policy, and checks the two give bit-identical
// results. Pass --quick for a reduced run (used by the test suite).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "collapse/bath.hpp"
#include "collapse/ensemble.hpp"
#include "collapse/index_model.hpp"
#include "collapse/phase_noise.hpp"
#include "collapse/true_collapse.hpp"

using namespace collapse;

namespace {

double run_ms(const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool same(Complex x, Complex y) {
    return std::memcmp(&x, &y, sizeof x) == 0;
}

bool same(const DensityMatrix2& x, const DensityMatrix2& y) {
    return same(x.aa, y.aa) && same(x.ab, y.ab) && same(x.ba, y.ba) && same(x.bb, y.bb);
}

struct Row {
    const char* name;
    double serial_ms;
    double parallel_ms;
    bool identical;
};

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const std::size_t n_trials = quick ? 2000 : 200000;
    const std::size_t n_modes = quick ? 100 : 400;
    const int grid_points = quick ? 4096 : 16384;

    ModelParams params;
    params.seed = 424242;
    const SystemState s0 = make_superposition({std::sqrt(0.5), 0.0}, {std::sqrt(0.5), 0.0});
    const RngStream base(params.seed, 0);

    std::vector<Row> rows;

    {
        EnsembleRho serial_out, parallel_out;
        const double ts = run_ms([&] {
            serial_out = ensemble_rho_mc(n_trials, 1.0, s0, params, base, ExecPolicy::Serial);
        });
        const double tp = run_ms([&] {
            parallel_out =
                ensemble_rho_mc(n_trials, 1.0, s0, params, base, ExecPolicy::Parallel);
        });
        rows.push_back({"cooked_ensemble", ts, tp, same(serial_out.rho, parallel_out.rho)});
    }
    {
        EnsembleRho serial_out, parallel_out;
        const double ts = run_ms([&] {
            serial_out =
                ensemble_rho_phase_mc(n_trials, 1.0, s0, params, base, ExecPolicy::Serial);
        });
        const double tp = run_ms([&] {
            parallel_out =
                ensemble_rho_phase_mc(n_trials, 1.0, s0, params, base, ExecPolicy::Parallel);
        });
        rows.push_back({"phase_ensemble", ts, tp, same(serial_out.rho, parallel_out.rho)});
    }
    {
        const BathRegister reg = forward_pass(init_bath(n_modes, params), params);
        Complex serial_out, parallel_out;
        const double ts = run_ms([&] {
            serial_out = grid_oracle_overlap(reg, params, 8.0, grid_points, ExecPolicy::Serial);
        });
        const double tp = run_ms([&] {
            parallel_out =
                grid_oracle_overlap(reg, params, 8.0, grid_points, ExecPolicy::Parallel);
        });
        rows.push_back({"grid_oracle", ts, tp, same(serial_out, parallel_out)});
    }
    {
        const std::size_t n_slices = 100;
        const auto sample_all = [&](ExecPolicy policy) {
            std::vector<double> b(n_trials);
            for_each_trial(n_trials, policy, [&](std::size_t i) {
                b[i] = integrate_path(sample_record(s0, n_slices, params, base.stream(i)).record);
            });
            return b;
        };
        std::vector<double> serial_out, parallel_out;
        const double ts = run_ms([&] { serial_out = sample_all(ExecPolicy::Serial); });
        const double tp = run_ms([&] { parallel_out = sample_all(ExecPolicy::Parallel); });
        rows.push_back({"index_records", ts, tp, serial_out == parallel_out});
    }

    std::printf("%-16s %12s %12s %9s %10s\n", "kernel", "serial_ms", "parallel_ms",
                "speedup", "identical");
    bool all_identical = true;
    for (const Row& r : rows) {
        std::printf("%-16s %12.2f %12.2f %8.2fx %10s\n", r.name, r.serial_ms,
                    r.parallel_ms, r.serial_ms / r.parallel_ms,
                    r.identical ? "yes" : "NO");
        all_identical = all_identical && r.identical;
    }
    if (!all_identical) {
        std::printf("FAIL: serial and parallel kernels disagree\n");
        return 1;
    }
    return 0;
}

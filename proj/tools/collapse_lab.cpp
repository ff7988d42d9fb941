// collapse-lab <model> --config <file> [--seed N] [--trials N] [--out DIR]
//
// Exit codes: 0 success, 2 configuration problem, 3 I/O failure.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "collapse/errors.hpp"
#include "collapse/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw collapse::IoError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw collapse::IoError("read failed: " + path);
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic collapse models and their unitary imitations"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long long> trials;
    std::optional<std::string> out_dir;
    bool serial = false;
    bool check_only = false;

    const std::vector<std::pair<std::string, std::string>> models = {
        {"true_collapse", "Norm-driven collapse: cooked records, outcomes, ensemble"},
        {"phase_noise", "Unitary phase kicks from the same records"},
        {"bath", "Environment register: forward pass and branch overlap"},
        {"recohere", "Reflect and reverse the environment, then probe"},
        {"histories", "Two-history decoherence functional over projector times"},
        {"index", "Pointer records: density, conditioned states, B statistics"},
        {"compare", "All routes to the ensemble density matrix, side by side"},
    };
    for (const auto& [name, blurb] : models) {
        CLI::App* sub = app.add_subcommand(name, blurb);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "Override params.seed");
        sub->add_option("--trials", trials, "Override n_trials");
        sub->add_option("--out", out_dir, "Override output_dir");
        sub->add_flag("--serial", serial, "Single-thread execution");
        sub->add_flag("--check", check_only, "Validate the config and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::string model_name = app.get_subcommands().front()->get_name();
        collapse::ExperimentConfig cfg =
            collapse::parse_config(read_file(config_path), config_path);
        cfg.model = collapse::model_from_string(model_name);
        if (seed) {
            cfg.params.seed = *seed;
            cfg.seed_set = true;
        }
        if (trials) cfg.n_trials = *trials;
        if (out_dir) cfg.output_dir = *out_dir;
        if (serial) cfg.policy = collapse::ExecPolicy::Serial;

        if (check_only) {
            const std::vector<collapse::Diagnostic> problems = collapse::validate(cfg);
            if (problems.empty()) {
                std::cout << "config ok\n";
                return 0;
            }
            for (const collapse::Diagnostic& d : problems) {
                std::cerr << d.field << ": " << d.message << "\n";
            }
            return 2;
        }

        const collapse::ExperimentReport report = collapse::run(cfg);
        std::cout << report.summary.dump();
        std::cerr << "wrote " << report.summary_path.string() << ", "
                  << report.trials_path.string() << ", "
                  << report.density_path.string() << "\n";
        return 0;
    } catch (const collapse::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const collapse::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "decaylab/errors.hpp"
#include "decaylab/runner.hpp"

namespace {

enum ExitCode {
    kOk = 0,
    kConfigError = 2,
    kTrivialDamping = 3,
    kSpectrumOnAxis = 4,
    kEigensolverFailure = 5,
    kIoError = 6,
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decaylab: damped wave / Schrodinger spectral laboratory"};
    std::string task_arg, config_path, out_dir;
    bool verbose = false;
    app.add_option("task", task_arg,
                   "simulate_wave | simulate_schrodinger | resolvent_scan | "
                   "spectral_constant | poincare | decay_report | full_report")
        ->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_flag("--verbose", verbose, "progress chatter on stderr");
    CLI11_PARSE(app, argc, argv);

    try {
        decaylab::RunConfig cfg = decaylab::parse_config(config_path);
        cfg.task = decaylab::task_from_name(task_arg);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.verbose = verbose;
        if (verbose) std::cerr << "config:\n" << decaylab::config_to_json(cfg) << "\n";

        const decaylab::RunManifest man = decaylab::run(cfg);

        std::cout << "task " << man.task << " done\n";
        for (const auto& [k, v] : man.constants) std::cout << "  " << k << " = " << v << "\n";
        for (const auto& [name, digest] : man.files)
            std::cout << "  wrote " << cfg.output_dir << "/" << name << " (" << digest << ")\n";
        std::cout << "  manifest: " << man.manifest_path << "\n";
        return kOk;
    } catch (const decaylab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const decaylab::TrivialDampingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTrivialDamping;
    } catch (const decaylab::SpectrumOnAxisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSpectrumOnAxis;
    } catch (const decaylab::EigensolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kEigensolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
}

#pragma once

#include <map>
#include <string>
#include <vector>

#include "decaylab/damping.hpp"
#include "decaylab/geometry.hpp"

namespace decaylab {

enum class Task {
    simulate_wave,
    simulate_schrodinger,
    resolvent_scan,
    spectral_constant,
    poincare,
    decay_report,
    full_report
};

Task task_from_name(const std::string& name);
std::string task_name(Task t);

struct RegionSpec {
    enum class Kind { damping_support, whole, intervals, fat_cantor };
    Kind kind = Kind::damping_support;
    std::vector<std::pair<double, double>> intervals;
    int level = 4;
    double target_measure = 0.5;
};

struct NumericsConfig {
    int modes = 128;
    double dt = 1e-3;
    double T = 100.0;
    double tau_max = 50.0;
    int grid_points = 512;
    double lambda_max = 0.0;  // 0 -> default 10*pi/L
    int lambda_points = 10;
    unsigned seed = 0;
};

struct RunConfig {
    Task task = Task::full_report;
    DomainSpec domain;
    MetricSpec metric = MetricSpec::constant(1.0);
    DampingSpec damping;
    RegionSpec omega;
    NumericsConfig numerics;
    std::string output_dir = "out";
    bool verbose = false;
};

struct RunManifest {
    std::string task;
    std::map<std::string, double> constants;          // alpha, beta, vol_F, C_P, fits...
    std::map<std::string, double> timings_seconds;    // informational, not reproducible
    std::vector<std::pair<std::string, std::string>> files;  // (name, fnv1a64 digest)
    std::string manifest_path;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& json_text);
std::string config_to_json(const RunConfig& config);

// Executes the task pipeline, writes CSVs and the manifest into
// config.output_dir. Partial outputs are removed on failure.
RunManifest run(const RunConfig& config);

Region omega_region(const RunConfig& config);

std::string fnv1a64_hex(const std::string& bytes);
std::string fnv1a64_file(const std::string& path);

}  // namespace decaylab

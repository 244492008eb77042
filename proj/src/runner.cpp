#include "decaylab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "decaylab/decay.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/inequalities.hpp"
#include "decaylab/resolvent.hpp"
#include "decaylab/semigroup.hpp"
#include "decaylab/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace decaylab {

Task task_from_name(const std::string& name) {
    if (name == "simulate_wave") return Task::simulate_wave;
    if (name == "simulate_schrodinger") return Task::simulate_schrodinger;
    if (name == "resolvent_scan") return Task::resolvent_scan;
    if (name == "spectral_constant") return Task::spectral_constant;
    if (name == "poincare") return Task::poincare;
    if (name == "decay_report") return Task::decay_report;
    if (name == "full_report") return Task::full_report;
    throw ConfigError("unknown task: " + name);
}

std::string task_name(Task t) {
    switch (t) {
        case Task::simulate_wave: return "simulate_wave";
        case Task::simulate_schrodinger: return "simulate_schrodinger";
        case Task::resolvent_scan: return "resolvent_scan";
        case Task::spectral_constant: return "spectral_constant";
        case Task::poincare: return "poincare";
        case Task::decay_report: return "decay_report";
        case Task::full_report: return "full_report";
    }
    return "?";
}

namespace {

[[noreturn]] void bad_key(const std::string& where, const std::string& key) {
    throw ConfigError("config: unknown key \"" + where + "." + key + "\"");
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, val] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) bad_key(where, key);
    }
}

double positive(const json& j, const std::string& name) {
    const double v = j.get<double>();
    if (!(v > 0.0)) throw ConfigError("config: " + name + " must be positive");
    return v;
}

std::vector<std::pair<double, double>> parse_intervals(const json& j) {
    std::vector<std::pair<double, double>> out;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError("config: intervals must be [lo, hi] pairs");
        out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(j, "", {"task", "domain", "metric", "damping", "omega", "numerics", "output_dir"});

    RunConfig cfg;
    if (!j.contains("task")) throw ConfigError("config: missing key \"task\"");
    cfg.task = task_from_name(j["task"].get<std::string>());

    if (j.contains("domain")) {
        const json& d = j["domain"];
        check_keys(d, "domain", {"shape", "boundary", "elements", "length", "length_y"});
        if (d.contains("shape")) {
            const std::string s = d["shape"].get<std::string>();
            if (s == "interval") cfg.domain.shape = Shape::interval;
            else if (s == "circle") cfg.domain.shape = Shape::circle;
            else if (s == "rectangle") cfg.domain.shape = Shape::rectangle;
            else throw ConfigError("config: domain.shape must be interval/circle/rectangle");
        }
        if (d.contains("boundary")) {
            const std::string b = d["boundary"].get<std::string>();
            if (b == "dirichlet") cfg.domain.boundary = Boundary::dirichlet;
            else if (b == "neumann") cfg.domain.boundary = Boundary::neumann;
            else if (b == "periodic") cfg.domain.boundary = Boundary::periodic;
            else throw ConfigError("config: domain.boundary must be dirichlet/neumann/periodic");
        } else if (cfg.domain.shape == Shape::circle) {
            cfg.domain.boundary = Boundary::periodic;
        }
        if (d.contains("elements")) cfg.domain.elements = d["elements"].get<int>();
        if (d.contains("length")) cfg.domain.length = positive(d["length"], "domain.length");
        if (d.contains("length_y"))
            cfg.domain.length_y = positive(d["length_y"], "domain.length_y");
        cfg.domain.validate();
    }

    if (j.contains("metric")) {
        const json& m = j["metric"];
        check_keys(m, "metric", {"kind", "value", "samples"});
        const std::string kind = m.value("kind", "constant");
        if (kind == "constant") {
            cfg.metric = MetricSpec::constant(m.contains("value") ? positive(m["value"], "metric.value") : 1.0);
        } else if (kind == "piecewise_linear") {
            if (!m.contains("samples")) throw ConfigError("config: metric.samples required");
            cfg.metric = MetricSpec::piecewise_linear(parse_intervals(m["samples"]));
        } else {
            throw ConfigError("config: metric.kind must be constant/piecewise_linear");
        }
    }

    if (j.contains("damping")) {
        const json& d = j["damping"];
        check_keys(d, "damping",
                   {"kind", "height", "intervals", "center", "width", "level", "target_measure"});
        const std::string kind = d.value("kind", "constant");
        if (kind == "constant") cfg.damping.kind = DampingKind::constant;
        else if (kind == "interval_union") cfg.damping.kind = DampingKind::interval_union;
        else if (kind == "bump") cfg.damping.kind = DampingKind::bump;
        else if (kind == "fat_cantor") cfg.damping.kind = DampingKind::fat_cantor;
        else throw ConfigError("config: damping.kind unknown: " + kind);
        if (d.contains("height")) {
            cfg.damping.height = d["height"].get<double>();
            if (cfg.damping.height < 0.0)
                throw ConfigError("config: damping.height must be nonnegative");
        }
        if (d.contains("intervals")) cfg.damping.intervals = parse_intervals(d["intervals"]);
        if (d.contains("center")) cfg.damping.center = d["center"].get<double>();
        if (d.contains("width")) cfg.damping.width = positive(d["width"], "damping.width");
        if (d.contains("level")) cfg.damping.level = d["level"].get<int>();
        if (d.contains("target_measure"))
            cfg.damping.target_measure = positive(d["target_measure"], "damping.target_measure");
    }

    if (j.contains("omega")) {
        const json& o = j["omega"];
        check_keys(o, "omega", {"kind", "intervals", "level", "target_measure"});
        const std::string kind = o.value("kind", "damping_support");
        if (kind == "damping_support") cfg.omega.kind = RegionSpec::Kind::damping_support;
        else if (kind == "whole") cfg.omega.kind = RegionSpec::Kind::whole;
        else if (kind == "intervals") cfg.omega.kind = RegionSpec::Kind::intervals;
        else if (kind == "fat_cantor") cfg.omega.kind = RegionSpec::Kind::fat_cantor;
        else throw ConfigError("config: omega.kind unknown: " + kind);
        if (o.contains("intervals")) cfg.omega.intervals = parse_intervals(o["intervals"]);
        if (o.contains("level")) cfg.omega.level = o["level"].get<int>();
        if (o.contains("target_measure"))
            cfg.omega.target_measure = positive(o["target_measure"], "omega.target_measure");
    }

    if (j.contains("numerics")) {
        const json& n = j["numerics"];
        check_keys(n, "numerics",
                   {"modes", "dt", "T", "tau_max", "grid_points", "lambda_max", "lambda_points",
                    "seed"});
        if (n.contains("modes")) {
            cfg.numerics.modes = n["modes"].get<int>();
            if (cfg.numerics.modes < 1) throw ConfigError("config: numerics.modes must be positive");
        }
        if (n.contains("dt")) cfg.numerics.dt = positive(n["dt"], "numerics.dt");
        if (n.contains("T")) cfg.numerics.T = positive(n["T"], "numerics.T");
        if (n.contains("tau_max")) cfg.numerics.tau_max = positive(n["tau_max"], "numerics.tau_max");
        if (n.contains("grid_points")) {
            cfg.numerics.grid_points = n["grid_points"].get<int>();
            if (cfg.numerics.grid_points < 3)
                throw ConfigError("config: numerics.grid_points must be >= 3");
        }
        if (n.contains("lambda_max"))
            cfg.numerics.lambda_max = positive(n["lambda_max"], "numerics.lambda_max");
        if (n.contains("lambda_points")) {
            cfg.numerics.lambda_points = n["lambda_points"].get<int>();
            if (cfg.numerics.lambda_points < 1)
                throw ConfigError("config: numerics.lambda_points must be positive");
        }
        if (n.contains("seed")) cfg.numerics.seed = n["seed"].get<unsigned>();
    }

    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_json(const RunConfig& c) {
    json j;
    j["task"] = task_name(c.task);
    json d;
    d["shape"] = c.domain.shape == Shape::interval ? "interval"
                 : c.domain.shape == Shape::circle ? "circle"
                                                   : "rectangle";
    d["boundary"] = c.domain.boundary == Boundary::dirichlet   ? "dirichlet"
                    : c.domain.boundary == Boundary::neumann ? "neumann"
                                                               : "periodic";
    d["elements"] = c.domain.elements;
    d["length"] = c.domain.length;
    if (c.domain.shape == Shape::rectangle) d["length_y"] = c.domain.length_y;
    j["domain"] = d;

    json m;
    if (c.metric.is_constant()) {
        m["kind"] = "constant";
        m["value"] = c.metric.samples.front().second;
    } else {
        m["kind"] = "piecewise_linear";
        json samples = json::array();
        for (const auto& [x, g] : c.metric.samples) samples.push_back({x, g});
        m["samples"] = samples;
    }
    j["metric"] = m;

    json a;
    switch (c.damping.kind) {
        case DampingKind::constant: a["kind"] = "constant"; break;
        case DampingKind::interval_union: {
            a["kind"] = "interval_union";
            json iv = json::array();
            for (const auto& [lo, hi] : c.damping.intervals) iv.push_back({lo, hi});
            a["intervals"] = iv;
            break;
        }
        case DampingKind::bump:
            a["kind"] = "bump";
            a["center"] = c.damping.center;
            a["width"] = c.damping.width;
            break;
        case DampingKind::fat_cantor:
            a["kind"] = "fat_cantor";
            a["level"] = c.damping.level;
            a["target_measure"] = c.damping.target_measure;
            break;
    }
    a["height"] = c.damping.height;
    j["damping"] = a;

    json o;
    switch (c.omega.kind) {
        case RegionSpec::Kind::damping_support: o["kind"] = "damping_support"; break;
        case RegionSpec::Kind::whole: o["kind"] = "whole"; break;
        case RegionSpec::Kind::intervals: {
            o["kind"] = "intervals";
            json iv = json::array();
            for (const auto& [lo, hi] : c.omega.intervals) iv.push_back({lo, hi});
            o["intervals"] = iv;
            break;
        }
        case RegionSpec::Kind::fat_cantor:
            o["kind"] = "fat_cantor";
            o["level"] = c.omega.level;
            o["target_measure"] = c.omega.target_measure;
            break;
    }
    j["omega"] = o;

    json n;
    n["modes"] = c.numerics.modes;
    n["dt"] = c.numerics.dt;
    n["T"] = c.numerics.T;
    n["tau_max"] = c.numerics.tau_max;
    n["grid_points"] = c.numerics.grid_points;
    if (c.numerics.lambda_max > 0.0) n["lambda_max"] = c.numerics.lambda_max;
    n["lambda_points"] = c.numerics.lambda_points;
    n["seed"] = c.numerics.seed;
    j["numerics"] = n;

    j["output_dir"] = c.output_dir;
    return j.dump(2);
}

Region omega_region(const RunConfig& c) {
    switch (c.omega.kind) {
        case RegionSpec::Kind::whole:
            return Region::whole(0.0, c.domain.length);
        case RegionSpec::Kind::intervals:
            return Region{c.omega.intervals}.clipped(0.0, c.domain.length);
        case RegionSpec::Kind::fat_cantor:
            return fat_cantor_region(c.omega.level, c.omega.target_measure, 0.0,
                                     c.domain.length);
        case RegionSpec::Kind::damping_support:
            switch (c.damping.kind) {
                case DampingKind::constant:
                    return Region::whole(0.0, c.domain.length);
                case DampingKind::interval_union:
                    return Region{c.damping.intervals}.clipped(0.0, c.domain.length);
                case DampingKind::bump:
                    return Region{{{c.damping.center - 0.5 * c.damping.width,
                                    c.damping.center + 0.5 * c.damping.width}}}
                        .clipped(0.0, c.domain.length);
                case DampingKind::fat_cantor:
                    return fat_cantor_region(c.damping.level, c.damping.target_measure, 0.0,
                                             c.domain.length);
            }
    }
    throw ConfigError("omega_region: unreachable");
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return fnv1a64_hex(ss.str());
}

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class OutputSet {
  public:
    explicit OutputSet(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw std::runtime_error("cannot create output dir " + dir);
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path p = fs::path(dir_) / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << content;
        out.close();
        if (!out) throw std::runtime_error("write failed: " + p.string());
        written_.push_back(p.string());
        names_.push_back(name);
    }

    void discard_all() {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
        names_.clear();
    }

    std::vector<std::pair<std::string, std::string>> digests() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (std::size_t i = 0; i < written_.size(); ++i)
            out.emplace_back(names_[i], fnv1a64_file(written_[i]));
        return out;
    }

    const std::string& dir() const { return dir_; }

  private:
    std::string dir_;
    std::vector<std::string> written_;
    std::vector<std::string> names_;
};

struct Workspace {
    std::unique_ptr<DiscreteOperator> op;  // stable address for basis.op
    SpectralBasis basis;
    DampingProfile profile;
};

Workspace make_workspace(const RunConfig& c) {
    Workspace w;
    w.op = std::make_unique<DiscreteOperator>(assemble(c.domain, c.metric));
    const int count = std::min(c.numerics.modes, w.op->n_free());
    w.basis = eigendecompose(*w.op, count);
    w.profile = build_damping(c.damping, *w.op);
    return w;
}

Eigen::VectorXcd smooth_wave_data(const Generator& gen) {
    Eigen::VectorXcd st(gen.dim());
    for (int k = 0; k < gen.n_u; ++k) st[k] = 1.0 / (1.0 + gen.lambda_sq[k]);
    for (int k = 0; k < gen.n_v; ++k) {
        const double lam2 = gen.quotient ? (k == 0 ? 0.0 : gen.lambda_sq[k - 1])
                                         : gen.lambda_sq[k];
        st[gen.n_u + k] = 1.0 / (1.0 + lam2);
    }
    return st;
}

Eigen::VectorXcd smooth_schrodinger_data(const Generator& gen) {
    Eigen::VectorXcd st(gen.dim());
    for (int k = 0; k < gen.n_u; ++k) st[k] = 1.0 / (1.0 + gen.lambda_sq[k]);
    return st;
}

Generator make_wave(const Workspace& w) {
    Generator gen = wave_generator(w.basis, w.profile);
    if (gen.boundary != Boundary::dirichlet) return neumann_quotient(gen);
    return gen;
}

std::string evolution_csv(const EvolutionResult& res, const DecayFit& fit) {
    std::string csv = "t,energy,bound_curve\n";
    const double ref2 = fit.ref_norm * fit.ref_norm;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        const double bound =
            fit.C_star * ref2 / std::pow(std::log(2.0 + res.times[i]), fit.p);
        csv += fmt17(res.times[i]) + "," + fmt17(res.energies[i]) + "," + fmt17(bound) + "\n";
    }
    return csv;
}

std::pair<EvolutionResult, DecayFit> simulate(const RunConfig& c, const Workspace& w,
                                              GeneratorKind kind) {
    const Generator gen = kind == GeneratorKind::wave
                              ? make_wave(w)
                              : schrodinger_generator(w.basis, w.profile);
    const Eigen::VectorXcd data = kind == GeneratorKind::wave ? smooth_wave_data(gen)
                                                              : smooth_schrodinger_data(gen);
    std::vector<double> times = {0.0};
    for (double t : log_spaced_times(std::min(1.0, c.numerics.T), c.numerics.T, 200))
        times.push_back(t);
    EvolutionResult res = evolve_oracle(gen, data, times);
    const double p = kind == GeneratorKind::wave ? 2.0 : 4.0;
    const DecayFit fit = fit_log_decay(res, p);
    return {std::move(res), fit};
}

void add_decay_constants(RunManifest& man, const std::string& prefix, const DecayFit& fit) {
    man.constants[prefix + "_C_star"] = fit.C_star;
    man.constants[prefix + "_p"] = fit.p;
    man.constants[prefix + "_ref_norm"] = fit.ref_norm;
}

std::vector<double> lambda_grid(const RunConfig& c, const SpectralBasis& basis) {
    const double lam1 = basis.lambda(basis.boundary == Boundary::dirichlet ? 0 : 1);
    double lmax = c.numerics.lambda_max;
    if (lmax <= 0.0) lmax = 10.0 * M_PI / c.domain.length;
    lmax = std::min(lmax, basis.lambda(basis.size() - 1));
    std::vector<double> grid;
    const int n = c.numerics.lambda_points;
    for (int i = 0; i < n; ++i)
        grid.push_back(lam1 + (lmax - lam1) * (i + 1) / n);
    return grid;
}

}  // namespace

RunManifest run(const RunConfig& c) {
    OutputSet out(c.output_dir);
    RunManifest man;
    man.task = task_name(c.task);

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&t_start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    };

    try {
        Workspace w = make_workspace(c);
        man.constants["n_free"] = w.op->n_free();
        man.constants["modes"] = w.basis.size();
        if (!w.profile.trivial()) {
            man.constants["alpha"] = w.profile.alpha;
            man.constants["beta"] = w.profile.beta;
            man.constants["vol_F"] = w.profile.vol_F;
        }
        man.timings_seconds["setup"] = elapsed();

        const bool wants_wave_sim = c.task == Task::simulate_wave ||
                                    c.task == Task::decay_report ||
                                    c.task == Task::full_report;
        const bool wants_schrodinger_sim = c.task == Task::simulate_schrodinger ||
                                           c.task == Task::decay_report ||
                                           c.task == Task::full_report;
        const bool wants_scan =
            c.task == Task::resolvent_scan || c.task == Task::full_report;
        const bool wants_constants =
            c.task == Task::spectral_constant || c.task == Task::full_report;
        const bool wants_poincare = c.task == Task::poincare || c.task == Task::full_report;

        if (wants_wave_sim) {
            if (w.profile.trivial() && c.task != Task::full_report) {
                // undamped runs are allowed for simulation tasks: conservative case
            }
            auto [res, fit] = simulate(c, w, GeneratorKind::wave);
            out.write("evolution_wave.csv", evolution_csv(res, fit));
            add_decay_constants(man, "wave_decay", fit);
            man.timings_seconds["simulate_wave"] = elapsed();
        }
        if (wants_schrodinger_sim) {
            auto [res, fit] = simulate(c, w, GeneratorKind::schrodinger);
            out.write("evolution_schrodinger.csv", evolution_csv(res, fit));
            add_decay_constants(man, "schrodinger_decay", fit);
            man.timings_seconds["simulate_schrodinger"] = elapsed();
        }
        if (wants_scan) {
            const Generator gen = make_wave(w);
            const ResolventScan scan = scan_M(gen, c.numerics.tau_max, c.numerics.grid_points);
            std::string csv = "tau,norm,sigma_min,running_M\n";
            for (std::size_t i = 0; i < scan.taus.size(); ++i)
                csv += fmt17(scan.taus[i]) + "," + fmt17(scan.norms[i]) + "," +
                       fmt17(scan.sigma_min[i]) + "," + fmt17(scan.running_M[i]) + "\n";
            out.write("scan.csv", csv);
            const GrowthFit fit = fit_growth(scan, GrowthFit::Model::exp);
            man.constants["growth_C"] = fit.C;
            man.constants["growth_c"] = fit.c;
            man.constants["growth_residual"] = fit.residual;
            const BurqPrediction pred = burq_prediction(fit.model, 1);
            man.constants["burq_energy_exponent"] = pred.energy_exponent;
            man.timings_seconds["resolvent_scan"] = elapsed();
        }
        if (wants_constants) {
            const Region omega = omega_region(c);
            const ConstantCurve curve =
                spectral_constant_curve(w.basis, omega, lambda_grid(c, w.basis));
            std::string csv = "Lambda,kappa,flagged\n";
            for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
                csv += fmt17(curve.lambdas[i]) + "," + fmt17(curve.kappas[i]) + "," +
                       (curve.flagged[i] ? "1" : "0") + "\n";
            out.write("constants.csv", csv);
            man.constants["kappa_fit_C"] = curve.fit_C;
            man.constants["kappa_fit_D"] = curve.fit_D;
            man.timings_seconds["spectral_constant"] = elapsed();
        }
        if (wants_poincare) {
            man.constants["C_P"] = poincare_constant(*w.op, w.profile);
            man.timings_seconds["poincare"] = elapsed();
        }
        if (c.task == Task::full_report) {
            const Region omega = omega_region(c);
            const std::vector<double> ratios =
                unique_continuation_check(w.basis, omega, w.basis.size());
            std::string csv = "k,lambda_sq,r_omega\n";
            for (std::size_t k = 0; k < ratios.size(); ++k)
                csv += std::to_string(k) + "," + fmt17(w.basis.eigenvalues[static_cast<Eigen::Index>(k)]) +
                       "," + fmt17(ratios[k]) + "\n";
            out.write("eigen.csv", csv);
            man.timings_seconds["eigen_table"] = elapsed();
        }

        // manifest last, listing all prior outputs with digests
        man.files = out.digests();
        json mj;
        mj["task"] = man.task;
        mj["config"] = json::parse(config_to_json(c));
        mj["version"] = "decaylab 0.1.0";
        for (const auto& [k, v] : man.constants) mj["constants"][k] = v;
        for (const auto& [k, v] : man.timings_seconds) mj["timings_seconds"][k] = v;
        for (const auto& [name, digest] : man.files) mj["files"][name] = digest;
        out.write("manifest.json", mj.dump(2) + "\n");
        man.manifest_path = (fs::path(c.output_dir) / "manifest.json").string();
        return man;
    } catch (...) {
        out.discard_all();
        throw;
    }
}

}  // namespace decaylab

// Compares the parallel resolvent-scan kernels against the serial reference.
// Usage: bench_scan [modes] [elements] [tau_max] [grid_points] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "decaylab/damping.hpp"
#include "decaylab/geometry.hpp"
#include "decaylab/inequalities.hpp"
#include "decaylab/resolvent.hpp"
#include "decaylab/semigroup.hpp"
#include "decaylab/spectral.hpp"

using namespace decaylab;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int modes = argc > 1 ? std::atoi(argv[1]) : 96;
    const int elements = argc > 2 ? std::atoi(argv[2]) : 512;
    const double tau_max = argc > 3 ? std::atof(argv[3]) : 40.0;
    const int grid = argc > 4 ? std::atoi(argv[4]) : 161;
    const int repeats = argc > 5 ? std::atoi(argv[5]) : 3;

    DomainSpec d;
    d.shape = Shape::interval;
    d.boundary = Boundary::dirichlet;
    d.elements = elements;
    d.length = 1.0;
    const DiscreteOperator op = assemble(d, MetricSpec::constant(1.0));
    const SpectralBasis basis = eigendecompose(op, modes);

    DampingSpec spec;
    spec.kind = DampingKind::fat_cantor;
    spec.level = 4;
    spec.target_measure = 0.5;
    const DampingProfile prof = build_damping(spec, op);
    const Generator gen = wave_generator(basis, prof);

    std::printf("scan benchmark: %d modes, %d elements, tau in [-%g, %g], %d grid points, "
                "%d worker(s)\n",
                modes, elements, tau_max, tau_max, grid, scan_threads());

    double t_serial = 1e300, t_parallel = 1e300;
    ResolventScan serial, parallel;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        serial = scan_M_serial(gen, tau_max, grid);
        t_serial = std::min(t_serial, seconds(t0));

        t0 = std::chrono::steady_clock::now();
        parallel = scan_M(gen, tau_max, grid, true);
        t_parallel = std::min(t_parallel, seconds(t0));
    }

    double max_diff = 0.0;
    for (std::size_t i = 0; i < serial.norms.size(); ++i)
        max_diff = std::max(max_diff, std::abs(serial.norms[i] - parallel.norms[i]));

    std::printf("  serial:   %8.3f s  (%zu evaluations)\n", t_serial, serial.taus.size());
    std::printf("  parallel: %8.3f s  speedup %.2fx\n", t_parallel, t_serial / t_parallel);
    std::printf("  max |serial - parallel| on norms: %g\n", max_diff);

    // same comparison for the constant-curve kernel
    std::vector<double> grid_lambda;
    for (int i = 1; i <= 10; ++i) grid_lambda.push_back(3.0 * i * M_PI);
    const Region omega = fat_cantor_region(4, 0.5, 0.0, 1.0);
    auto t0 = std::chrono::steady_clock::now();
    const ConstantCurve cs = spectral_constant_curve(basis, omega, grid_lambda, false);
    const double tcs = seconds(t0);
    t0 = std::chrono::steady_clock::now();
    const ConstantCurve cp = spectral_constant_curve(basis, omega, grid_lambda, true);
    const double tcp = seconds(t0);
    double cmax = 0.0;
    for (std::size_t i = 0; i < cs.kappas.size(); ++i)
        cmax = std::max(cmax, std::abs(cs.kappas[i] - cp.kappas[i]));
    std::printf("constant-curve: serial %.3f s, parallel %.3f s (speedup %.2fx), "
                "max diff %g\n",
                tcs, tcp, tcs / std::max(1e-12, tcp), cmax);
    return max_diff == 0.0 && cmax == 0.0 ? 0 : 1;
}

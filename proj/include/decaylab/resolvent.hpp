#pragma once

#include <vector>

#include <Eigen/Dense>

#include "decaylab/semigroup.hpp"

namespace decaylab {

struct ResolventScan {
    std::vector<double> taus;       // ascending, symmetric about 0
    std::vector<double> norms;      // ||R(tau)|| in the generator weight metric
    std::vector<double> sigma_min;  // norms[i] == 1 / sigma_min[i]
    std::vector<double> running_M;  // max norm over |tau'| <= |tau_i|
    double mu_max = 0.0;
};

struct GrowthFit {
    enum class Model { exp, exp_sqrt };
    Model model = Model::exp;
    double C = 0.0;
    double c = 0.0;
    double residual = 0.0;  // max log-space slack of the envelope
    double tau_lo = 0.0, tau_hi = 0.0;
};

// sigma_min of W^{1/2} (G - i tau) W^{-1/2}; the resolvent norm is its inverse.
double resolvent_sigma_min(const Generator& gen, double tau);

// +inf (spectrum on the axis) when sigma_min < 1e-14.
double resolvent_norm(const Generator& gen, double tau);

// Scan over a symmetric grid [-mu_max, mu_max], refined near resonant peaks.
// Grid spacing is forced below half the minimal spectral gap in the window.
// Throws SpectrumOnAxisError if the generator has spectrum on i*[-mu_max, mu_max].
ResolventScan scan_M(const Generator& gen, double mu_max, int grid_points,
                     bool parallel = true);
ResolventScan scan_M_serial(const Generator& gen, double mu_max, int grid_points);

GrowthFit fit_growth(const ResolventScan& scan, GrowthFit::Model model);

// Spectral Helmholtz solve behind (G - i tau)^{-1}:
//   wave:        (-diag(l^2) + tau^2 - i tau B) u = rhs
//   schrodinger: (-diag(l^2) - tau + i B) psi = -i rhs
SpectralCoefficients helmholtz_solve(const SpectralBasis& basis, const DampingProfile& profile,
                                     double tau, const SpectralCoefficients& rhs,
                                     GeneratorKind kind);

// Worker count for parallel scans: DECAYLAB_THREADS env var, else OpenMP default.
int scan_threads();

}  // namespace decaylab

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "decaylab/damping.hpp"
#include "decaylab/spectral.hpp"

namespace decaylab {

enum class GeneratorKind { wave, schrodinger };

// Evolution generator in truncated spectral coordinates.
//
// wave:         G = [[0, I], [-diag(l^2), -B]],  B = E^T D E
// schrodinger:  G = -i diag(l^2) - B
//
// `weight` is the diagonal Hilbert metric used for resolvent norms
// (H^1 x L^2, resp. L^2); `energy_weight` is the energy (semi)norm metric
// in which G is exactly dissipative and the Cayley stepper contracts.
struct Generator {
    GeneratorKind kind = GeneratorKind::wave;
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd weight;
    Eigen::VectorXd energy_weight;
    Eigen::VectorXd lambda_sq;  // eigenvalues of the u-block modes
    Eigen::MatrixXd coupling;   // B = E^T D E over all modes
    bool quotient = false;
    Boundary boundary = Boundary::dirichlet;
    int n_u = 0;  // u-block dimension (wave) or state dimension (schrodinger)
    int n_v = 0;  // v-block dimension (wave only)

    int dim() const { return static_cast<int>(matrix.rows()); }
};

Generator wave_generator(const SpectralBasis& basis, const DampingProfile& profile);
Generator schrodinger_generator(const SpectralBasis& basis, const DampingProfile& profile);

// Neumann/periodic wave quotient: drops the constant mode from the u-block.
// No-op (with a stderr warning) for Dirichlet generators.
Generator neumann_quotient(const Generator& gen);

// Project a full wave state onto the quotient state (drop u_0).
Eigen::VectorXcd quotient_project(const Generator& full_gen, const Eigen::VectorXcd& state);

// max over samples of Re<GU,U>_E / <U,U>_E on random unit vectors
double dissipativity_abscissa(const Generator& gen, int samples, unsigned seed);

enum class EvolutionMethod { oracle, stepper };

struct EvolutionResult {
    std::vector<double> times;
    std::vector<double> energies;
    std::vector<Eigen::VectorXcd> snapshots;  // empty unless requested
    Eigen::VectorXcd final_state;
    EvolutionMethod method = EvolutionMethod::oracle;
    double initial_sobolev = 0.0;  // H^2 x H^1 (wave) / H^2 (schrodinger) data norm
    bool oracle_fallback = false;  // eigendecomposition was too ill-conditioned
};

// Exact evolution through the dense eigendecomposition of G (falls back to
// the scaled-squared matrix exponential when the eigenbasis is ill-conditioned).
EvolutionResult evolve_oracle(const Generator& gen, const Eigen::VectorXcd& state0,
                              const std::vector<double>& times, bool keep_snapshots = false);

// Implicit midpoint (Cayley) stepping: unconditionally contractive in the
// energy metric for dissipative G.
EvolutionResult evolve_stepped(const Generator& gen, const Eigen::VectorXcd& state0,
                               double dt, double T, int record_every = 1);

double wave_energy(const Generator& gen, const Eigen::VectorXcd& state);
double schrodinger_energy(const Eigen::VectorXcd& state);
double energy(const Generator& gen, const Eigen::VectorXcd& state);

// Theorem-style reference norm of the initial data: spectral H^2 x H^1 (wave)
// or H^2 (schrodinger).
double initial_data_norm(const Generator& gen, const Eigen::VectorXcd& state);

std::vector<double> log_spaced_times(double t_lo, double t_hi, int count);

}  // namespace decaylab

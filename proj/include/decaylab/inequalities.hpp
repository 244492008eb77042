#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "decaylab/damping.hpp"
#include "decaylab/spectral.hpp"

namespace decaylab {

// Mass matrix restricted to omega: per-element quadrature weighted by the
// exactly covered fraction of each element.
Eigen::SparseMatrix<double> masked_mass(const DiscreteOperator& op, const Region& omega);

// Nodal-indicator variant: elements with both endpoints inside count fully,
// one endpoint counts half.
Eigen::SparseMatrix<double> masked_mass(const DiscreteOperator& op,
                                        const std::vector<bool>& omega_mask);

struct ConstantCurve {
    std::vector<double> lambdas;  // cutoff grid
    std::vector<double> kappas;   // kappa(Lambda, omega) >= 1
    std::vector<bool> flagged;    // effective non-observability (kappa > 1e8)
    double fit_C = 0.0, fit_D = 0.0;
};

// kappa = max over phi in span{e_k : lambda_k <= Lambda} of
// ||phi||_L2(M) / ||phi||_L2(omega) = 1/sqrt(min eig of the restricted Gram).
double spectral_constant(const SpectralBasis& basis,
                         const Eigen::SparseMatrix<double>& mass_omega, double Lambda,
                         bool* flagged = nullptr);

ConstantCurve spectral_constant_curve(const SpectralBasis& basis, const Region& omega,
                                      const std::vector<double>& lambda_grid,
                                      bool parallel = true);

// Smallest affine envelope of (Lambda, log kappa): returns (C, D) with
// kappa <= C exp(D Lambda) on the unflagged grid points, D >= 0.
std::pair<double, double> fit_spectral_constants(const ConstantCurve& curve);

// Optimal constant in C_P (||grad u||^2 + int a |u|^2) >= ||u||_H1^2:
// largest eigenvalue of the pencil (K + Mm, K + D).
double poincare_constant(const DiscreteOperator& op, const DampingProfile& profile,
                         Eigen::VectorXd* attaining = nullptr);

// r_k = ||e_k||_L2(omega) / ||e_k||_L2(M) for k < k_max; all must be > 0.
std::vector<double> unique_continuation_check(const SpectralBasis& basis, const Region& omega,
                                              int k_max);

}  // namespace decaylab

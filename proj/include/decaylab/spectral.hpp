#pragma once

#include <complex>

#include <Eigen/Dense>

#include "decaylab/geometry.hpp"

namespace decaylab {

// Mass-orthonormal eigenpairs of (K, Mm): K e_k = lambda_k^2 Mm e_k,
// E^T Mm E = I, eigenvalues ascending.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;  // lambda_k^2
    Eigen::MatrixXd vectors;      // columns e_k on the free dofs
    Boundary boundary = Boundary::dirichlet;
    const DiscreteOperator* op = nullptr;

    int size() const { return static_cast<int>(eigenvalues.size()); }
    double lambda(int k) const { return std::sqrt(std::max(0.0, eigenvalues[k])); }

    // coefficients <f, e_k>_Mm of a nodal vector on the free dofs
    Eigen::VectorXcd project(const Eigen::VectorXcd& nodal) const;
    Eigen::VectorXcd reconstruct(const Eigen::VectorXcd& coeffs) const;

    // worst per-column relative residual |K e - l^2 M e| / |K e|
    double residual() const;
    double orthonormality_error() const;
};

struct SpectralCoefficients {
    Eigen::VectorXcd values;
    const SpectralBasis* basis = nullptr;
};

SpectralBasis eigendecompose(const DiscreteOperator& op, int count);

// ( sum_k (1 + lambda_k^2)^s |u_k|^2 )^{1/2}
double sobolev_norm(const SpectralCoefficients& coeffs, double s);

enum class FilterMode { hyperbolic, elliptic };

// hyperbolic keeps |tau^2 - lambda_k^2| <= band, elliptic the complement;
// the two parts always sum to the input.
SpectralCoefficients frequency_filter(const SpectralCoefficients& coeffs, double tau,
                                      FilterMode mode, double band = 1.0);

}  // namespace decaylab

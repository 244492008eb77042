#include "decaylab/spectral.hpp"

#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

Eigen::VectorXcd SpectralBasis::project(const Eigen::VectorXcd& nodal) const {
    return vectors.transpose() * (op->Mm * nodal);
}

Eigen::VectorXcd SpectralBasis::reconstruct(const Eigen::VectorXcd& coeffs) const {
    return vectors * coeffs;
}

double SpectralBasis::residual() const {
    double worst = 0.0;
    for (int k = 0; k < size(); ++k) {
        const Eigen::VectorXd e = vectors.col(k);
        const Eigen::VectorXd Ke = op->K * e;
        const Eigen::VectorXd Me = op->Mm * e;
        const Eigen::VectorXd r = Ke - eigenvalues[k] * Me;
        // the (1 + lambda^2) |Me| term keeps the zero mode (Ke ~ 0) well scaled
        const double scale = Ke.norm() + (1.0 + eigenvalues[k]) * Me.norm();
        worst = std::max(worst, r.norm() / scale);
    }
    return worst;
}

double SpectralBasis::orthonormality_error() const {
    const Eigen::MatrixXd G = vectors.transpose() * (op->Mm * vectors);
    return (G - Eigen::MatrixXd::Identity(size(), size())).cwiseAbs().maxCoeff();
}

SpectralBasis eigendecompose(const DiscreteOperator& op, int count) {
    if (count < 1 || count > op.n_free())
        throw ConfigError("eigendecompose: count out of range");

    const Eigen::MatrixXd K = Eigen::MatrixXd(op.K);
    const Eigen::MatrixXd M = Eigen::MatrixXd(op.Mm);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
    if (solver.info() != Eigen::Success)
        throw EigensolverError("eigendecompose: generalized eigensolver failed to converge");

    SpectralBasis basis;
    basis.op = &op;
    basis.boundary = op.domain.boundary;
    basis.eigenvalues = solver.eigenvalues().head(count);
    basis.vectors = solver.eigenvectors().leftCols(count);

    // clamp the Neumann/periodic zero mode (returned as O(eps) noise)
    for (int k = 0; k < count; ++k)
        if (std::abs(basis.eigenvalues[k]) < 1e-8) basis.eigenvalues[k] = 0.0;

    const double res = basis.residual();
    if (res > 1e-8)
        throw EigensolverError("eigendecompose: residual " + std::to_string(res) +
                               " exceeds 1e-8");
    return basis;
}

double sobolev_norm(const SpectralCoefficients& coeffs, double s) {
    const SpectralBasis& b = *coeffs.basis;
    double sum = 0.0;
    for (Eigen::Index k = 0; k < coeffs.values.size(); ++k)
        sum += std::pow(1.0 + b.eigenvalues[k], s) * std::norm(coeffs.values[k]);
    return std::sqrt(sum);
}

SpectralCoefficients frequency_filter(const SpectralCoefficients& coeffs, double tau,
                                      FilterMode mode, double band) {
    SpectralCoefficients out;
    out.basis = coeffs.basis;
    out.values = coeffs.values;
    const Eigen::VectorXd& lam2 = coeffs.basis->eigenvalues;
    for (Eigen::Index k = 0; k < out.values.size(); ++k) {
        const bool hyp = std::abs(tau * tau - lam2[k]) <= band;
        if (hyp != (mode == FilterMode::hyperbolic)) out.values[k] = 0.0;
    }
    return out;
}

}  // namespace decaylab

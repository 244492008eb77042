#include "decaylab/inequalities.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "decaylab/errors.hpp"
#include "decaylab/resolvent.hpp"

namespace decaylab {

Eigen::SparseMatrix<double> masked_mass(const DiscreteOperator& op, const Region& omega) {
    const auto els = op.element_list();
    Eigen::VectorXd w(els.size());
    for (std::size_t e = 0; e < els.size(); ++e) {
        const auto& el = els[e];
        w[static_cast<Eigen::Index>(e)] = omega.covered(el.x0, el.x0 + el.h) / el.h;
    }
    return op.weighted_mass(w);
}

Eigen::SparseMatrix<double> masked_mass(const DiscreteOperator& op,
                                        const std::vector<bool>& omega_mask) {
    if (omega_mask.size() != static_cast<std::size_t>(op.n_nodes()))
        throw ConfigError("masked_mass: mask size does not match node count");
    const auto els = op.element_list();
    Eigen::VectorXd w(els.size());
    for (std::size_t e = 0; e < els.size(); ++e) {
        const int in = (omega_mask[els[e].a] ? 1 : 0) + (omega_mask[els[e].b] ? 1 : 0);
        w[static_cast<Eigen::Index>(e)] = 0.5 * in;
    }
    return op.weighted_mass(w);
}

double spectral_constant(const SpectralBasis& basis,
                         const Eigen::SparseMatrix<double>& mass_omega, double Lambda,
                         bool* flagged) {
    int m = 0;
    while (m < basis.size() && basis.lambda(m) <= Lambda) ++m;
    if (m == 0) throw ConfigError("spectral_constant: no modes below the cutoff");

    const Eigen::MatrixXd E = basis.vectors.leftCols(m);
    const Eigen::MatrixXd G = E.transpose() * (mass_omega * E);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw EigensolverError("spectral_constant: Gram eigensolve failed");
    const double mu = es.eigenvalues()(0);
    if (flagged) *flagged = false;
    if (!(mu > 1e-16)) {
        if (flagged) {
            *flagged = true;
            return 1e16;  // finite-precision loss, not a true infinite constant
        }
        throw EigensolverError("spectral_constant: restricted Gram numerically singular");
    }
    const double kappa = 1.0 / std::sqrt(mu);
    if (kappa > 1e8 && flagged) *flagged = true;
    return kappa;
}

ConstantCurve spectral_constant_curve(const SpectralBasis& basis, const Region& omega,
                                      const std::vector<double>& lambda_grid, bool parallel) {
    const Eigen::SparseMatrix<double> Mw = masked_mass(*basis.op, omega);
    ConstantCurve curve;
    curve.lambdas = lambda_grid;
    curve.kappas.resize(lambda_grid.size());
    curve.flagged.assign(lambda_grid.size(), false);

    const long n = static_cast<long>(lambda_grid.size());
#ifdef _OPENMP
    const int nthreads = parallel ? scan_threads() : 1;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
    for (long i = 0; i < n; ++i) {
        bool flag = false;
        curve.kappas[static_cast<std::size_t>(i)] =
            spectral_constant(basis, Mw, lambda_grid[static_cast<std::size_t>(i)], &flag);
        curve.flagged[static_cast<std::size_t>(i)] = flag;
    }
    const auto [C, D] = fit_spectral_constants(curve);
    curve.fit_C = C;
    curve.fit_D = D;
    return curve;
}

std::pair<double, double> fit_spectral_constants(const ConstantCurve& curve) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
        if (curve.flagged[i]) continue;
        xs.push_back(curve.lambdas[i]);
        ys.push_back(std::log(curve.kappas[i]));
    }
    if (xs.size() < 1) throw ConfigError("fit_spectral_constants: no usable points");
    if (xs.size() == 1) return {curve.kappas[0], 0.0};

    // smallest dominating affine envelope: search slope D >= 0
    const double ymax = *std::max_element(ys.begin(), ys.end());
    const double ymin = *std::min_element(ys.begin(), ys.end());
    const double xspan = xs.back() - xs.front();
    const double d_hi = std::max(1e-6, 2.0 * (ymax - ymin) / std::max(1e-9, xspan));
    double best_D = 0.0, best_logC = ymax, best_res = std::numeric_limits<double>::infinity();
    const int grid = 400;
    for (int j = 0; j <= grid; ++j) {
        const double d = d_hi * j / grid;
        double logC = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < xs.size(); ++i) logC = std::max(logC, ys[i] - d * xs[i]);
        double res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            res = std::max(res, logC + d * xs[i] - ys[i]);
        if (res < best_res - 1e-12) {
            best_res = res;
            best_D = d;
            best_logC = logC;
        }
    }
    return {std::exp(best_logC), best_D};
}

double poincare_constant(const DiscreteOperator& op, const DampingProfile& profile,
                         Eigen::VectorXd* attaining) {
    if (profile.trivial())
        throw TrivialDampingError("poincare_constant: trivial damping, int a > 0 required");
    const Eigen::SparseMatrix<double> D = damping_matrix(op, profile);
    const Eigen::MatrixXd A = Eigen::MatrixXd(op.K) + Eigen::MatrixXd(op.Mm);
    const Eigen::MatrixXd B = Eigen::MatrixXd(op.K) + Eigen::MatrixXd(D);

    // hypothesis check: K + D must be positive definite
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success)
        throw TrivialDampingError(
            "poincare_constant: K + D singular, hypothesis int a > 0 failed");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
    if (es.info() != Eigen::Success)
        throw EigensolverError("poincare_constant: pencil eigensolver failed");
    const Eigen::Index last = es.eigenvalues().size() - 1;
    if (attaining) *attaining = es.eigenvectors().col(last);
    return es.eigenvalues()(last);
}

std::vector<double> unique_continuation_check(const SpectralBasis& basis, const Region& omega,
                                              int k_max) {
    const Eigen::SparseMatrix<double> Mw = masked_mass(*basis.op, omega);
    const int k = std::min(k_max, basis.size());
    std::vector<double> ratios(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const Eigen::VectorXd e = basis.vectors.col(i);
        const double num = e.dot(Mw * e);
        const double den = e.dot(basis.op->Mm * e);
        ratios[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, num) / den);
    }
    return ratios;
}

}  // namespace decaylab

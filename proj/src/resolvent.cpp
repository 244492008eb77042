#include "decaylab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {
constexpr double kSingularSigma = 1e-14;
}

int scan_threads() {
#ifdef _OPENMP
    if (const char* env = std::getenv("DECAYLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double resolvent_sigma_min(const Generator& gen, double tau) {
    const int m = gen.dim();
    Eigen::MatrixXcd A = gen.matrix;
    for (int i = 0; i < m; ++i) A(i, i) -= std::complex<double>(0.0, tau);
    for (int i = 0; i < m; ++i) {
        const double wi = std::sqrt(gen.weight[i]);
        for (int j = 0; j < m; ++j) A(i, j) *= wi / std::sqrt(gen.weight[j]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(m - 1);
}

double resolvent_norm(const Generator& gen, double tau) {
    const double s = resolvent_sigma_min(gen, tau);
    if (s < kSingularSigma) return std::numeric_limits<double>::infinity();
    return 1.0 / s;
}

namespace {

std::vector<double> sigma_kernel(const Generator& gen, const std::vector<double>& taus,
                                 bool parallel) {
    std::vector<double> out(taus.size());
    if (parallel) {
#ifdef _OPENMP
        const int nthreads = scan_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (long i = 0; i < static_cast<long>(taus.size()); ++i)
            out[static_cast<std::size_t>(i)] =
                resolvent_sigma_min(gen, taus[static_cast<std::size_t>(i)]);
        return out;
#endif
    }
    for (std::size_t i = 0; i < taus.size(); ++i) out[i] = resolvent_sigma_min(gen, taus[i]);
    return out;
}

// Smallest gap between the imaginary parts of the relevant resonances in
// [0, mu_max]: lambda_k for waves, lambda_k^2 for Schrodinger.
double min_resonance_gap(const Generator& gen, double mu_max) {
    std::vector<double> res;
    for (Eigen::Index k = 0; k < gen.lambda_sq.size(); ++k) {
        const double r = gen.kind == GeneratorKind::wave ? std::sqrt(gen.lambda_sq[k])
                                                         : gen.lambda_sq[k];
        if (r <= mu_max) res.push_back(r);
    }
    std::sort(res.begin(), res.end());
    double gap = mu_max;
    for (std::size_t i = 1; i < res.size(); ++i)
        if (res[i] - res[i - 1] > 1e-9) gap = std::min(gap, res[i] - res[i - 1]);
    return gap;
}

ResolventScan scan_impl(const Generator& gen, double mu_max, int grid_points, bool parallel) {
    if (!(mu_max > 0.0)) throw ConfigError("scan_M: mu_max must be positive");
    if (grid_points < 3) throw ConfigError("scan_M: need at least 3 grid points");

    // numerical form of the hypothesis sigma(A) on i*R = empty in the window
    {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gen.matrix, false);
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            const auto z = es.eigenvalues()[k];
            if (std::abs(z.real()) < 1e-12 && std::abs(z.imag()) <= mu_max + 1.0)
                throw SpectrumOnAxisError(z.imag(),
                                          "spectrum on axis at tau = " +
                                              std::to_string(z.imag()));
        }
    }

    // spacing must resolve the spectral gaps, otherwise peaks can be missed
    const double gap = min_resonance_gap(gen, mu_max);
    int count = grid_points | 1;  // odd, so tau = 0 is sampled
    if (gap > 0.0) {
        const int needed = static_cast<int>(std::ceil(4.0 * mu_max / gap)) + 1;
        count = std::max(count, needed | 1);
    }

    ResolventScan scan;
    scan.mu_max = mu_max;
    scan.taus.resize(count);
    for (int i = 0; i < count; ++i)
        scan.taus[i] = -mu_max + 2.0 * mu_max * i / (count - 1);
    std::vector<double> sig = sigma_kernel(gen, scan.taus, parallel);

    // bisection refinement around isolated peaks
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<double> extra;
        for (std::size_t i = 1; i + 1 < scan.taus.size(); ++i) {
            const double ni = 1.0 / sig[i];
            const double nl = 1.0 / sig[i - 1], nr = 1.0 / sig[i + 1];
            if (ni > 10.0 * std::max(nl, nr)) {
                extra.push_back(0.5 * (scan.taus[i - 1] + scan.taus[i]));
                extra.push_back(0.5 * (scan.taus[i] + scan.taus[i + 1]));
            }
        }
        if (extra.empty()) break;
        const std::vector<double> extra_sig = sigma_kernel(gen, extra, parallel);
        for (std::size_t i = 0; i < extra.size(); ++i) {
            scan.taus.push_back(extra[i]);
            sig.push_back(extra_sig[i]);
        }
        std::vector<std::size_t> order(scan.taus.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return scan.taus[a] < scan.taus[b]; });
        std::vector<double> t2(order.size()), s2(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            t2[i] = scan.taus[order[i]];
            s2[i] = sig[order[i]];
        }
        scan.taus.swap(t2);
        sig.swap(s2);
    }

    scan.sigma_min = sig;
    scan.norms.resize(sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (sig[i] < kSingularSigma)
            throw SpectrumOnAxisError(scan.taus[i], "spectrum on axis at tau = " +
                                                        std::to_string(scan.taus[i]));
        scan.norms[i] = 1.0 / sig[i];
    }

    // running supremum ordered by |tau|
    std::vector<std::size_t> order(scan.taus.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(scan.taus[a]) < std::abs(scan.taus[b]);
    });
    scan.running_M.resize(scan.taus.size());
    double running = 0.0;
    for (std::size_t i : order) {
        running = std::max(running, scan.norms[i]);
        scan.running_M[i] = running;
    }
    return scan;
}

}  // namespace

ResolventScan scan_M(const Generator& gen, double mu_max, int grid_points, bool parallel) {
    return scan_impl(gen, mu_max, grid_points, parallel);
}

ResolventScan scan_M_serial(const Generator& gen, double mu_max, int grid_points) {
    return scan_impl(gen, mu_max, grid_points, false);
}

GrowthFit fit_growth(const ResolventScan& scan, GrowthFit::Model model) {
    if (scan.norms.empty()) throw ConfigError("fit_growth: empty scan");
    GrowthFit fit;
    fit.model = model;
    fit.tau_lo = 0.0;
    fit.tau_hi = scan.mu_max;

    auto phi = [&](double tau) {
        const double a = std::abs(tau);
        return model == GrowthFit::Model::exp ? a : std::sqrt(a);
    };

    std::vector<double> px(scan.taus.size()), py(scan.taus.size());
    for (std::size_t i = 0; i < scan.taus.size(); ++i) {
        px[i] = phi(scan.taus[i]);
        py[i] = std::log(scan.norms[i]);
    }
    const double ymax = *std::max_element(py.begin(), py.end());
    const double ymin = *std::min_element(py.begin(), py.end());
    const double xmax = *std::max_element(px.begin(), px.end());
    const double c_hi = std::max(1.0, 2.0 * (ymax - ymin) / std::max(1e-9, xmax));

    double best_c = 0.0, best_logC = ymax, best_res = std::numeric_limits<double>::infinity();
    const int c_grid = 400;
    for (int j = 0; j <= c_grid; ++j) {
        const double c = c_hi * j / c_grid;
        double logC = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < px.size(); ++i)
            logC = std::max(logC, py[i] - c * px[i]);
        double res = 0.0;
        for (std::size_t i = 0; i < px.size(); ++i)
            res = std::max(res, logC + c * px[i] - py[i]);
        if (res < best_res - 1e-12) {
            best_res = res;
            best_c = c;
            best_logC = logC;
        }
    }
    fit.c = best_c;
    fit.C = std::exp(best_logC);
    fit.residual = best_res;
    return fit;
}

SpectralCoefficients helmholtz_solve(const SpectralBasis& basis, const DampingProfile& profile,
                                     double tau, const SpectralCoefficients& rhs,
                                     GeneratorKind kind) {
    const int n = basis.size();
    if (rhs.values.size() != n) throw ConfigError("helmholtz_solve: rhs size mismatch");

    const Eigen::SparseMatrix<double> D = damping_matrix(*basis.op, profile);
    const Eigen::MatrixXd B = basis.vectors.transpose() * (D * basis.vectors);
    const std::complex<double> I(0.0, 1.0);

    Eigen::MatrixXcd H;
    Eigen::VectorXcd b;
    if (kind == GeneratorKind::wave) {
        H = (-basis.eigenvalues.asDiagonal().toDenseMatrix()).cast<std::complex<double>>();
        H.diagonal().array() += tau * tau;
        H -= I * tau * B.cast<std::complex<double>>();
        b = rhs.values;
    } else {
        H = (-basis.eigenvalues.asDiagonal().toDenseMatrix()).cast<std::complex<double>>();
        H.diagonal().array() -= tau;
        H += I * B.cast<std::complex<double>>();
        b = -I * rhs.values;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(n - 1) < kSingularSigma)
        throw SpectrumOnAxisError(tau, "spectrum on axis: Helmholtz system singular at tau = " +
                                           std::to_string(tau));
    SpectralCoefficients out;
    out.basis = &basis;
    out.values = svd.solve(b);

    const double rel = (H * out.values - b).norm() / std::max(1e-300, b.norm());
    if (rel > 1e-10)
        throw EigensolverError("helmholtz_solve: residual " + std::to_string(rel) +
                               " exceeds 1e-10");
    return out;
}

}  // namespace decaylab

#include "decaylab/semigroup.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "decaylab/errors.hpp"

namespace decaylab {

namespace {

Eigen::MatrixXd spectral_coupling(const SpectralBasis& basis, const DampingProfile& profile) {
    const Eigen::SparseMatrix<double> D = damping_matrix(*basis.op, profile);
    return basis.vectors.transpose() * (D * basis.vectors);
}

}  // namespace

Generator wave_generator(const SpectralBasis& basis, const DampingProfile& profile) {
    if (profile.node_x.size() != basis.op->nodes.size())
        throw ConfigError("wave_generator: basis and damping profile use different meshes");
    const int n = basis.size();
    Generator g;
    g.kind = GeneratorKind::wave;
    g.boundary = basis.boundary;
    g.n_u = n;
    g.n_v = n;
    g.lambda_sq = basis.eigenvalues;
    g.coupling = spectral_coupling(basis, profile);

    g.matrix = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    g.matrix.topRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
    g.matrix.bottomLeftCorner(n, n) = (-basis.eigenvalues.asDiagonal().toDenseMatrix())
                                          .cast<std::complex<double>>();
    g.matrix.bottomRightCorner(n, n) = -g.coupling.cast<std::complex<double>>();

    g.weight.resize(2 * n);
    g.energy_weight.resize(2 * n);
    for (int k = 0; k < n; ++k) {
        g.weight[k] = 1.0 + basis.eigenvalues[k];
        g.energy_weight[k] = basis.eigenvalues[k];
        g.weight[n + k] = 1.0;
        g.energy_weight[n + k] = 1.0;
    }
    return g;
}

Generator schrodinger_generator(const SpectralBasis& basis, const DampingProfile& profile) {
    if (profile.node_x.size() != basis.op->nodes.size())
        throw ConfigError("schrodinger_generator: basis and damping profile use different meshes");
    const int n = basis.size();
    Generator g;
    g.kind = GeneratorKind::schrodinger;
    g.boundary = basis.boundary;
    g.n_u = n;
    g.n_v = 0;
    g.lambda_sq = basis.eigenvalues;
    g.coupling = spectral_coupling(basis, profile);

    const std::complex<double> I(0.0, 1.0);
    g.matrix = -I * basis.eigenvalues.asDiagonal().toDenseMatrix().cast<std::complex<double>>() -
               g.coupling.cast<std::complex<double>>();
    g.weight = Eigen::VectorXd::Ones(n);
    g.energy_weight = g.weight;
    return g;
}

Generator neumann_quotient(const Generator& gen) {
    if (gen.kind != GeneratorKind::wave)
        throw ConfigError("neumann_quotient: wave generators only");
    if (gen.boundary == Boundary::dirichlet) {
        std::cerr << "neumann_quotient: Dirichlet generator has no zero mode, returning as is\n";
        return gen;
    }
    if (gen.lambda_sq[0] != 0.0)
        throw ConfigError("neumann_quotient: first mode is not the constant mode");

    const int n = gen.n_u;
    const int nu = n - 1;  // u-block without the constant mode
    Generator q;
    q.kind = GeneratorKind::wave;
    q.boundary = gen.boundary;
    q.quotient = true;
    q.n_u = nu;
    q.n_v = n;
    q.lambda_sq = gen.lambda_sq.tail(nu);
    q.coupling = gen.coupling;

    q.matrix = Eigen::MatrixXcd::Zero(nu + n, nu + n);
    // du_k/dt = v_k for k >= 1
    for (int k = 0; k < nu; ++k) q.matrix(k, nu + 1 + k) = 1.0;
    // dv_k/dt = -l_k^2 u_k - (B v)_k ; l_0^2 u_0 term vanishes
    for (int k = 0; k < nu; ++k) q.matrix(nu + 1 + k, k) = -q.lambda_sq[k];
    q.matrix.bottomRightCorner(n, n) -= gen.coupling.cast<std::complex<double>>();

    q.weight.resize(nu + n);
    q.energy_weight.resize(nu + n);
    for (int k = 0; k < nu; ++k) {
        q.weight[k] = q.lambda_sq[k];  // Hdot^1 norm on the quotient
        q.energy_weight[k] = q.lambda_sq[k];
    }
    for (int k = 0; k < n; ++k) {
        q.weight[nu + k] = 1.0;
        q.energy_weight[nu + k] = 1.0;
    }
    return q;
}

Eigen::VectorXcd quotient_project(const Generator& full_gen, const Eigen::VectorXcd& state) {
    const int n = full_gen.n_u;
    Eigen::VectorXcd out(n - 1 + n);
    out.head(n - 1) = state.segment(1, n - 1);
    out.tail(n) = state.tail(n);
    return out;
}

double dissipativity_abscissa(const Generator& gen, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int m = gen.dim();
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd u(m);
        for (int i = 0; i < m; ++i) u[i] = std::complex<double>(gauss(rng), gauss(rng));
        const Eigen::VectorXcd gu = gen.matrix * u;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < m; ++i) {
            num += gen.energy_weight[i] * (gu[i] * std::conj(u[i])).real();
            den += gen.energy_weight[i] * std::norm(u[i]);
        }
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

double wave_energy(const Generator& gen, const Eigen::VectorXcd& state) {
    double e = 0.0;
    for (int k = 0; k < gen.n_u; ++k) e += gen.lambda_sq[k] * std::norm(state[k]);
    for (int k = 0; k < gen.n_v; ++k) e += std::norm(state[gen.n_u + k]);
    return e;
}

double schrodinger_energy(const Eigen::VectorXcd& state) { return state.squaredNorm(); }

double energy(const Generator& gen, const Eigen::VectorXcd& state) {
    return gen.kind == GeneratorKind::wave ? wave_energy(gen, state)
                                           : schrodinger_energy(state);
}

double initial_data_norm(const Generator& gen, const Eigen::VectorXcd& state) {
    double s = 0.0;
    for (int k = 0; k < gen.n_u; ++k) {
        const double w = 1.0 + gen.lambda_sq[k];
        s += w * w * std::norm(state[k]);  // H^2 on the u / psi component
    }
    if (gen.kind == GeneratorKind::wave) {
        // H^1 on the v component; quotient keeps the constant mode with weight 1
        for (int k = 0; k < gen.n_v; ++k) {
            const int mode = gen.quotient ? k : k;
            const double lam2 = gen.quotient
                                    ? (k == 0 ? 0.0 : gen.lambda_sq[k - 1])
                                    : gen.lambda_sq[mode];
            s += (1.0 + lam2) * std::norm(state[gen.n_u + k]);
        }
    }
    return std::sqrt(s);
}

EvolutionResult evolve_oracle(const Generator& gen, const Eigen::VectorXcd& state0,
                              const std::vector<double>& times, bool keep_snapshots) {
    EvolutionResult res;
    res.method = EvolutionMethod::oracle;
    res.initial_sobolev = initial_data_norm(gen, state0);
    res.times = times;
    res.energies.reserve(times.size());

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(gen.matrix);
    bool fallback = solver.info() != Eigen::Success;
    Eigen::MatrixXcd V, Vinv;
    Eigen::VectorXcd mu, c0;
    if (!fallback) {
        V = solver.eigenvectors();
        mu = solver.eigenvalues();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
        const double cond = svd.singularValues()(0) /
                            svd.singularValues()(svd.singularValues().size() - 1);
        if (!(cond < 1e12)) fallback = true;
        else {
            Vinv = V.partialPivLu().inverse();
            c0 = Vinv * state0;
        }
    }
    res.oracle_fallback = fallback;

    for (double t : times) {
        Eigen::VectorXcd st;
        if (!fallback) {
            Eigen::VectorXcd c = c0;
            for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(mu[k] * t);
            st = V * c;
        } else {
            st = (gen.matrix * t).exp() * state0;
        }
        res.energies.push_back(energy(gen, st));
        if (keep_snapshots) res.snapshots.push_back(st);
        res.final_state = std::move(st);
    }
    return res;
}

EvolutionResult evolve_stepped(const Generator& gen, const Eigen::VectorXcd& state0,
                               double dt, double T, int record_every) {
    if (!(dt > 0.0)) throw ConfigError("evolve_stepped: dt must be positive");
    EvolutionResult res;
    res.method = EvolutionMethod::stepper;
    res.initial_sobolev = initial_data_norm(gen, state0);

    const int m = gen.dim();
    // each reported step is taken as kSubsteps Cayley substeps: the map stays a
    // contraction in the energy metric while the O(dt^2) phase error of the
    // oscillatory modes drops by kSubsteps^2
    constexpr int kSubsteps = 32;
    const double dts = dt / kSubsteps;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(m, m);
    const Eigen::MatrixXcd plus = I + 0.5 * dts * gen.matrix;
    Eigen::PartialPivLU<Eigen::MatrixXcd> minus_lu(I - 0.5 * dts * gen.matrix);
    if (std::abs(minus_lu.determinant()) == 0.0)
        throw EigensolverError("evolve_stepped: singular step matrix");

    const long steps = static_cast<long>(std::llround(T / dt));
    Eigen::VectorXcd st = state0;
    res.times.push_back(0.0);
    res.energies.push_back(energy(gen, st));
    for (long s = 1; s <= steps; ++s) {
        for (int q = 0; q < kSubsteps; ++q) st = minus_lu.solve(plus * st);
        if (s % record_every == 0 || s == steps) {
            res.times.push_back(s * dt);
            res.energies.push_back(energy(gen, st));
        }
    }
    res.final_state = std::move(st);
    return res;
}

std::vector<double> log_spaced_times(double t_lo, double t_hi, int count) {
    std::vector<double> t(count);
    const double l0 = std::log(t_lo), l1 = std::log(t_hi);
    for (int i = 0; i < count; ++i)
        t[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
    return t;
}

}  // namespace decaylab

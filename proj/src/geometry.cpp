#include "decaylab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "decaylab/damping.hpp"
#include "decaylab/errors.hpp"

namespace decaylab {

void DomainSpec::validate() const {
    if (elements < 2) throw ConfigError("domain: elements must be >= 2");
    if (length <= 0.0) throw ConfigError("domain: length must be positive");
    if (shape == Shape::rectangle && length_y <= 0.0)
        throw ConfigError("domain: length_y must be positive");
    if (shape == Shape::circle && boundary != Boundary::periodic)
        throw ConfigError("domain: circle requires periodic boundary");
    if (shape != Shape::circle && boundary == Boundary::periodic)
        throw ConfigError("domain: periodic boundary requires circle");
}

MetricSpec MetricSpec::constant(double g0) {
    MetricSpec m;
    m.samples = {{0.0, g0}};
    m.validate();
    return m;
}

MetricSpec MetricSpec::piecewise_linear(std::vector<std::pair<double, double>> samples) {
    MetricSpec m;
    m.samples = std::move(samples);
    std::sort(m.samples.begin(), m.samples.end());
    m.validate();
    return m;
}

void MetricSpec::validate() const {
    if (samples.empty()) throw ConfigError("metric: no samples");
    for (const auto& [x, g] : samples)
        if (!(g > 0.0)) throw ConfigError("metric: g must be strictly positive");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].first > samples[i - 1].first))
            throw ConfigError("metric: sample abscissae must be strictly increasing");
}

double MetricSpec::value(double x) const {
    if (samples.size() == 1) return samples.front().second;
    if (x <= samples.front().first) return samples.front().second;
    if (x >= samples.back().first) return samples.back().second;
    auto it = std::upper_bound(samples.begin(), samples.end(), std::make_pair(x, 0.0),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto& [x1, g1] = *it;
    const auto& [x0, g0] = *(it - 1);
    const double t = (x - x0) / (x1 - x0);
    return g0 + t * (g1 - g0);
}

bool MetricSpec::is_constant() const {
    for (const auto& [x, g] : samples)
        if (g != samples.front().second) return false;
    return true;
}

double MetricSpec::min_value() const {
    double m = samples.front().second;
    for (const auto& [x, g] : samples) m = std::min(m, g);
    return m;
}

double MetricSpec::lipschitz_constant() const {
    double lip = 0.0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double dg = samples[i].second - samples[i - 1].second;
        const double dx = samples[i].first - samples[i - 1].first;
        lip = std::max(lip, std::abs(dg / dx));
    }
    return lip;
}

double DiscreteOperator::mesh_width() const { return domain.length / domain.elements; }

double DiscreteOperator::volume() const {
    if (domain.shape == Shape::rectangle) {
        // constant metric only; in 2-D det(g I) = g^2, so sqrt(det g) = g
        const double g = metric.samples.front().second;
        return domain.length * domain.length_y * g;
    }
    double vol = 0.0;
    for (const auto& e : element_list()) vol += e.h * std::sqrt(metric.value(e.x0 + 0.5 * e.h));
    return vol;
}

std::vector<DiscreteOperator::Element> DiscreteOperator::element_list() const {
    std::vector<Element> els;
    const int N = domain.elements;
    const double h = domain.length / N;
    if (domain.shape == Shape::interval) {
        els.reserve(N);
        for (int e = 0; e < N; ++e) els.push_back({e, e + 1, e * h, h});
    } else if (domain.shape == Shape::circle) {
        els.reserve(N);
        for (int e = 0; e < N; ++e) els.push_back({e, (e + 1) % N, e * h, h});
    } else {
        throw ConfigError("element_list: 1-D meshes only");
    }
    return els;
}

Eigen::SparseMatrix<double> DiscreteOperator::weighted_mass(
    const Eigen::VectorXd& element_weights) const {
    const auto els = element_list();
    if (element_weights.size() != 0 &&
        element_weights.size() != static_cast<Eigen::Index>(els.size()))
        throw ConfigError("weighted_mass: weight count does not match element count");

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * els.size());
    for (std::size_t e = 0; e < els.size(); ++e) {
        const auto& el = els[e];
        const double w = element_weights.size() ? element_weights[static_cast<Eigen::Index>(e)] : 1.0;
        if (w == 0.0) continue;
        const double gm = std::sqrt(metric.value(el.x0 + 0.5 * el.h));
        const double c = w * gm * el.h / 6.0;
        const int ia = free_dofs[el.a], ib = free_dofs[el.b];
        if (ia >= 0) trips.emplace_back(ia, ia, 2.0 * c);
        if (ib >= 0) trips.emplace_back(ib, ib, 2.0 * c);
        if (ia >= 0 && ib >= 0) {
            trips.emplace_back(ia, ib, c);
            trips.emplace_back(ib, ia, c);
        }
    }
    Eigen::SparseMatrix<double> M(n_free(), n_free());
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

Eigen::VectorXd DiscreteOperator::restrict_nodal(const Eigen::VectorXd& full) const {
    Eigen::VectorXd r(n_free());
    for (int i = 0; i < n_nodes(); ++i)
        if (free_dofs[i] >= 0) r[free_dofs[i]] = full[i];
    return r;
}

Eigen::VectorXd DiscreteOperator::extend_free(const Eigen::VectorXd& reduced) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n_nodes());
    for (int i = 0; i < n_nodes(); ++i)
        if (free_dofs[i] >= 0) f[i] = reduced[free_dofs[i]];
    return f;
}

namespace {

// 1-D Laplace-Beltrami assembly: K_ij = int g^{-1/2} phi_i' phi_j' dx,
// Mm_ij = int g^{1/2} phi_i phi_j dx, metric sampled at element midpoints.
DiscreteOperator assemble_1d(const DomainSpec& domain, const MetricSpec& metric) {
    DiscreteOperator op;
    op.domain = domain;
    op.metric = metric;

    const int N = domain.elements;
    const double h = domain.length / N;
    const int n_nodes = (domain.shape == Shape::circle) ? N : N + 1;

    op.nodes.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) op.nodes[i] = i * h;

    op.free_dofs.assign(n_nodes, -1);
    int nf = 0;
    for (int i = 0; i < n_nodes; ++i) {
        const bool boundary_node =
            (domain.shape == Shape::interval) && (i == 0 || i == n_nodes - 1);
        if (domain.boundary == Boundary::dirichlet && boundary_node) continue;
        op.free_dofs[i] = nf++;
    }

    std::vector<Eigen::Triplet<double>> kt, mt;
    for (const auto& el : op.element_list()) {
        const double gm = metric.value(el.x0 + 0.5 * el.h);
        const double ck = 1.0 / std::sqrt(gm);  // sqrt(g) * g^{-1} in 1-D
        const double cm = std::sqrt(gm);
        const double ke = ck / el.h;
        const double me = cm * el.h / 6.0;
        const int idx[2] = {op.free_dofs[el.a], op.free_dofs[el.b]};
        const double kloc[2][2] = {{ke, -ke}, {-ke, ke}};
        const double mloc[2][2] = {{2 * me, me}, {me, 2 * me}};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                if (idx[r] < 0 || idx[c] < 0) continue;
                kt.emplace_back(idx[r], idx[c], kloc[r][c]);
                mt.emplace_back(idx[r], idx[c], mloc[r][c]);
            }
    }
    op.K.resize(nf, nf);
    op.Mm.resize(nf, nf);
    op.K.setFromTriplets(kt.begin(), kt.end());
    op.Mm.setFromTriplets(mt.begin(), mt.end());
    return op;
}

Eigen::SparseMatrix<double> kron(const Eigen::SparseMatrix<double>& A,
                                 const Eigen::SparseMatrix<double>& B) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(A.nonZeros()) * B.nonZeros());
    for (int ka = 0; ka < A.outerSize(); ++ka)
        for (Eigen::SparseMatrix<double>::InnerIterator ia(A, ka); ia; ++ia)
            for (int kb = 0; kb < B.outerSize(); ++kb)
                for (Eigen::SparseMatrix<double>::InnerIterator ib(B, kb); ib; ++ib)
                    trips.emplace_back(static_cast<int>(ia.row() * B.rows() + ib.row()),
                                       static_cast<int>(ia.col() * B.cols() + ib.col()),
                                       ia.value() * ib.value());
    Eigen::SparseMatrix<double> C(A.rows() * B.rows(), A.cols() * B.cols());
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
}

// Tensor-product rectangle via Kronecker sums of the two 1-D operators.
DiscreteOperator assemble_rectangle(const DomainSpec& domain, const MetricSpec& metric) {
    if (!metric.is_constant())
        throw ConfigError("assemble: rectangle supports constant metrics only");

    DomainSpec dx = domain;
    dx.shape = Shape::interval;
    DomainSpec dy = dx;
    dy.length = domain.length_y;

    const DiscreteOperator ox = assemble_1d(dx, metric);
    const DiscreteOperator oy = assemble_1d(dy, metric);

    DiscreteOperator op;
    op.domain = domain;
    op.metric = metric;
    op.K = kron(ox.K, oy.Mm) + kron(ox.Mm, oy.K);
    op.Mm = kron(ox.Mm, oy.Mm);
    op.free_dofs.assign(static_cast<std::size_t>(op.K.rows()), 0);
    for (int i = 0; i < op.K.rows(); ++i) op.free_dofs[i] = i;
    return op;
}

}  // namespace

DiscreteOperator assemble(const DomainSpec& domain, const MetricSpec& metric) {
    domain.validate();
    metric.validate();
    if (domain.shape == Shape::rectangle) return assemble_rectangle(domain, metric);
    return assemble_1d(domain, metric);
}

Eigen::SparseMatrix<double> damping_matrix(const DiscreteOperator& op,
                                           const DampingProfile& profile) {
    if (profile.nodal.minCoeff() < 0.0)
        throw ConfigError("damping_matrix: negative nodal damping value");
    if (op.domain.shape == Shape::rectangle) {
        const double c = profile.nodal[0];
        if ((profile.nodal.array() != c).any())
            throw ConfigError("damping_matrix: rectangles support constant damping only");
        return c * op.Mm;
    }
    if (profile.nodal.size() != op.n_nodes())
        throw ConfigError("damping_matrix: profile not aligned with mesh nodes");
    const auto els = op.element_list();
    Eigen::VectorXd w(els.size());
    for (std::size_t e = 0; e < els.size(); ++e)
        w[static_cast<Eigen::Index>(e)] =
            0.5 * (profile.nodal[els[e].a] + profile.nodal[els[e].b]);
    return op.weighted_mass(w);
}

}  // namespace decaylab

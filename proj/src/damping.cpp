#include "decaylab/damping.hpp"

#include <algorithm>
#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

bool Region::contains(double x) const {
    for (const auto& [lo, hi] : intervals)
        if (x >= lo && x <= hi) return true;
    return false;
}

double Region::length() const {
    double s = 0.0;
    for (const auto& [lo, hi] : intervals) s += hi - lo;
    return s;
}

Region Region::clipped(double lo, double hi) const {
    Region r;
    for (const auto& [a, b] : intervals) {
        const double c = std::max(a, lo), d = std::min(b, hi);
        if (d > c) r.intervals.emplace_back(c, d);
    }
    return r;
}

double Region::covered(double lo, double hi) const { return clipped(lo, hi).length(); }

Region fat_cantor_region(int level, double target, double lo, double hi) {
    const double len = hi - lo;
    if (level < 1) throw ConfigError("fat_cantor: level must be >= 1");
    if (!(target > 0.0 && target < len))
        throw ConfigError("fat_cantor: target measure outside (0, domain length)");

    // total removed after L stages is base*(1 - 2^-L)/2; scale so it equals len - target
    const double base = 2.0 * (len - target) / (1.0 - std::pow(2.0, -level));

    std::vector<std::pair<double, double>> pieces = {{lo, hi}};
    for (int j = 1; j <= level; ++j) {
        const double gap = base * std::pow(4.0, -j);
        std::vector<std::pair<double, double>> next;
        next.reserve(2 * pieces.size());
        for (const auto& [a, b] : pieces) {
            if (gap >= b - a)
                throw ConfigError("fat_cantor: target measure too small for this level");
            const double mid = 0.5 * (a + b);
            next.emplace_back(a, mid - 0.5 * gap);
            next.emplace_back(mid + 0.5 * gap, b);
        }
        pieces.swap(next);
    }
    return Region{std::move(pieces)};
}

double metric_measure(const Region& region, const MetricSpec& metric) {
    // exact integral of sqrt(p + q x) over each interval, split at metric samples
    auto sqrt_linear = [](double p, double q, double x0, double x1) {
        if (q == 0.0) return std::sqrt(p) * (x1 - x0);
        const double a = std::pow(p + q * x0, 1.5), b = std::pow(p + q * x1, 1.5);
        return 2.0 / (3.0 * q) * (b - a);
    };
    double total = 0.0;
    for (const auto& [lo, hi] : region.intervals) {
        std::vector<double> cuts = {lo, hi};
        for (const auto& [x, g] : metric.samples)
            if (x > lo && x < hi) cuts.push_back(x);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            const double x0 = cuts[i - 1], x1 = cuts[i];
            if (x1 <= x0) continue;
            const double g0 = metric.value(x0), g1 = metric.value(x1);
            const double q = (g1 - g0) / (x1 - x0);
            total += sqrt_linear(g0 - q * x0, q, x0, x1);
        }
    }
    return total;
}

double DampingProfile::integral() const {
    double s = 0.0;
    const int n = static_cast<int>(node_x.size());
    const int nel = periodic ? n : n - 1;
    for (int e = 0; e < nel; ++e) {
        const int a = e, b = (e + 1) % n;
        const double h = periodic && b == 0 ? domain_length - node_x[a] : node_x[b] - node_x[a];
        const double g = std::sqrt(metric.value(node_x[a] + 0.5 * h));
        s += g * h * 0.5 * (nodal[a] + nodal[b]);
    }
    return s;
}

double superlevel_measure(const DampingProfile& profile, double alpha, bool strict) {
    const int n = static_cast<int>(profile.node_x.size());
    const int nel = profile.periodic ? n : n - 1;
    double total = 0.0;
    const double eps = 1e-12 * std::max(1.0, profile.beta);
    for (int e = 0; e < nel; ++e) {
        const int ia = e, ib = (e + 1) % n;
        const double h = profile.periodic && ib == 0 ? profile.domain_length - profile.node_x[ia]
                                                     : profile.node_x[ib] - profile.node_x[ia];
        const double g = std::sqrt(profile.metric.value(profile.node_x[ia] + 0.5 * h));
        const double a0 = profile.nodal[ia], a1 = profile.nodal[ib];
        auto above = [&](double v) { return strict ? v > alpha + eps : v >= alpha - eps; };
        double frac;
        if (above(a0) && above(a1)) {
            frac = 1.0;
        } else if (!above(a0) && !above(a1)) {
            frac = 0.0;
        } else {
            // linear crossing
            const double t = (alpha - a0) / (a1 - a0);
            frac = above(a0) ? t : 1.0 - t;
            frac = std::clamp(frac, 0.0, 1.0);
        }
        total += g * h * frac;
    }
    return total;
}

namespace {

void select_bounds(DampingProfile& p) {
    p.beta = p.nodal.size() ? p.nodal.maxCoeff() : 0.0;
    if (p.beta == 0.0) {
        p.alpha = 0.0;
        p.vol_F = 0.0;
        p.F_mask.assign(static_cast<std::size_t>(p.nodal.size()), false);
        return;
    }
    const double support = superlevel_measure(p, 0.0, true);
    // one mesh cell of slack: the pw-linear interpolant shifts level-set
    // crossings by O(h), which must not push alpha down a dyadic level
    double hmax = 0.0;
    for (Eigen::Index i = 0; i + 1 < p.node_x.size(); ++i)
        hmax = std::max(hmax, p.node_x[i + 1] - p.node_x[i]);
    double alpha = p.beta;
    for (int j = 0; j < 60; ++j) {
        alpha = p.beta * std::pow(2.0, -j);
        if (superlevel_measure(p, alpha, false) >= 0.5 * support - hmax) break;
    }
    p.alpha = alpha;
    p.vol_F = superlevel_measure(p, alpha, false);
    p.F_mask.assign(static_cast<std::size_t>(p.nodal.size()), false);
    for (Eigen::Index i = 0; i < p.nodal.size(); ++i)
        p.F_mask[static_cast<std::size_t>(i)] = p.nodal[i] >= alpha - 1e-12 * p.beta;
}

}  // namespace

DampingProfile build_damping(const DampingSpec& spec, const DiscreteOperator& op) {
    if (spec.height < 0.0) throw ConfigError("damping: negative height");
    if (op.domain.shape == Shape::rectangle && spec.kind != DampingKind::constant)
        throw ConfigError("damping: rectangles support constant damping only");

    DampingProfile p;
    p.node_x = op.nodes;
    p.metric = op.metric;
    p.domain_length = op.domain.length;
    p.periodic = op.domain.boundary == Boundary::periodic;

    const int n = op.n_nodes();
    p.nodal.resize(n);

    Region set;  // generating set, when the profile is an indicator
    bool set_based = false;
    switch (spec.kind) {
        case DampingKind::constant:
            p.nodal.setConstant(spec.height);
            set = Region::whole(0.0, op.domain.length);
            set_based = true;
            break;
        case DampingKind::interval_union: {
            set = Region{spec.intervals}.clipped(0.0, op.domain.length);
            for (int i = 0; i < n; ++i)
                p.nodal[i] = set.contains(op.nodes[i]) ? spec.height : 0.0;
            set_based = true;
            break;
        }
        case DampingKind::bump: {
            for (int i = 0; i < n; ++i) {
                const double d = std::abs(op.nodes[i] - spec.center);
                p.nodal[i] = d < 0.5 * spec.width
                                 ? spec.height * std::pow(std::cos(M_PI * d / spec.width), 2)
                                 : 0.0;
            }
            break;
        }
        case DampingKind::fat_cantor: {
            set = fat_cantor_region(spec.level, spec.target_measure, 0.0, op.domain.length);
            for (int i = 0; i < n; ++i)
                p.nodal[i] = set.contains(op.nodes[i]) ? spec.height : 0.0;
            set_based = true;
            break;
        }
    }

    select_bounds(p);
    // indicator profiles: F is the generating set itself, measured exactly
    if (set_based && p.beta > 0.0) p.vol_F = metric_measure(set, op.metric);
    return p;
}

std::tuple<double, double, double> damping_bounds(const DampingProfile& profile) {
    if (profile.nodal.size() == 0 || profile.nodal.maxCoeff() == 0.0)
        throw TrivialDampingError("trivial damping: a == 0, hypothesis int a > 0 fails");
    DampingProfile tmp = profile;
    select_bounds(tmp);
    return {tmp.alpha, tmp.beta, tmp.vol_F};
}

}  // namespace decaylab

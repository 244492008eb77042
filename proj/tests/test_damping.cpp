#include <doctest.h>

#include <cmath>

#include "decaylab/damping.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/geometry.hpp"

using namespace decaylab;

namespace {

DiscreteOperator unit_interval(int n, Boundary bc = Boundary::dirichlet) {
    DomainSpec d;
    d.shape = Shape::interval;
    d.boundary = bc;
    d.elements = n;
    d.length = 1.0;
    return assemble(d, MetricSpec::constant(1.0));
}

// combinatorial measure of the level-L construction: every stage-j removal
// deletes 2^{j-1} centered gaps of length base/4^j
double cantor_measure_oracle(int level, double target) {
    const double base = 2.0 * (1.0 - target) / (1.0 - std::pow(2.0, -level));
    double m = 1.0;
    for (int j = 1; j <= level; ++j) m -= std::pow(2.0, j - 1) * base * std::pow(4.0, -j);
    return m;
}

}  // namespace

TEST_CASE("constant damping: bounds are (beta, beta, vol)") {
    const DiscreteOperator op = unit_interval(32);
    DampingSpec spec;
    spec.kind = DampingKind::constant;
    spec.height = 0.7;
    const DampingProfile p = build_damping(spec, op);
    CHECK(p.alpha == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(p.beta == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(p.vol_F == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(p.trivial());
}

TEST_CASE("zero damping is trivial and bounds refuse it") {
    const DiscreteOperator op = unit_interval(32);
    DampingSpec spec;
    spec.kind = DampingKind::constant;
    spec.height = 0.0;
    const DampingProfile p = build_damping(spec, op);
    CHECK(p.trivial());
    CHECK_THROWS_AS(damping_bounds(p), TrivialDampingError);
}

TEST_CASE("fat Cantor region: exact target measure and gap structure") {
    for (int level : {1, 2, 4, 6}) {
        const Region r = fat_cantor_region(level, 0.5, 0.0, 1.0);
        CHECK(static_cast<int>(r.intervals.size()) == (1 << level));
        CHECK(r.length() == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(r.length() == doctest::Approx(cantor_measure_oracle(level, 0.5)).epsilon(1e-13));
    }
    // pieces stay disjoint and ordered
    const Region r = fat_cantor_region(4, 0.5, 0.0, 1.0);
    for (size_t i = 0; i + 1 < r.intervals.size(); ++i)
        CHECK(r.intervals[i].second < r.intervals[i + 1].first);
}

TEST_CASE("fat Cantor damping resolves the measure on a fine mesh") {
    const DiscreteOperator op = unit_interval(4096);
    DampingSpec spec;
    spec.kind = DampingKind::fat_cantor;
    spec.level = 4;
    spec.target_measure = 0.5;
    spec.height = 1.0;
    const DampingProfile p = build_damping(spec, op);
    CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.vol_F - 0.5) <= 2.0 / 4096.0);
}

TEST_CASE("bump profile: alpha at half height, support at least half-max width") {
    const DiscreteOperator op = unit_interval(512);
    DampingSpec spec;
    spec.kind = DampingKind::bump;
    spec.height = 1.0;
    spec.center = 0.5;
    spec.width = 0.6;  // half-max support width 0.3
    const DampingProfile p = build_damping(spec, op);

    // oracle: scan the nodal values directly
    double beta = 0.0;
    for (int i = 0; i < p.nodal.size(); ++i) beta = std::max(beta, p.nodal[i]);
    CHECK(p.beta == doctest::Approx(beta).epsilon(1e-14));
    CHECK(p.beta == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(p.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.vol_F >= 0.3 - 2.0 / 512.0);  // half-max support, up to mesh resolution
}

TEST_CASE("alpha is dyadic and its superlevel set keeps half the positive mass") {
    const DiscreteOperator op = unit_interval(1024);
    DampingSpec spec;
    spec.kind = DampingKind::bump;
    spec.height = 2.0;
    spec.center = 0.3;
    spec.width = 0.4;
    const DampingProfile p = build_damping(spec, op);
    const auto [alpha, beta, vol] = damping_bounds(p);
    CHECK(alpha == p.alpha);
    CHECK(beta == p.beta);
    const double j = std::log2(beta / alpha);
    CHECK(std::abs(j - std::round(j)) < 1e-12);
    const double positive = superlevel_measure(p, 0.0, /*strict=*/true);
    const double h = 1.0 / 1024.0;  // selection allows one cell of slack
    CHECK(superlevel_measure(p, alpha) >= 0.5 * positive - h);
    // the next dyadic level down would be wasteful only if this one failed
    CHECK(vol == doctest::Approx(superlevel_measure(p, alpha)).epsilon(1e-12));
}

TEST_CASE("metric measure is exact for linear metrics") {
    // int_0^1 sqrt(1+3x) dx = 2/9 * (8 - 1) = 14/9
    const MetricSpec g = MetricSpec::piecewise_linear({{0.0, 1.0}, {1.0, 4.0}});
    CHECK(metric_measure(Region::whole(0.0, 1.0), g) ==
          doctest::Approx(14.0 / 9.0).epsilon(1e-14));
    // half interval: 2/9 * ((2.5)^{3/2} - 1)
    CHECK(metric_measure(Region::whole(0.0, 0.5), g) ==
          doctest::Approx(2.0 / 9.0 * (std::pow(2.5, 1.5) - 1.0)).epsilon(1e-14));
}

TEST_CASE("interval-union profile marks F exactly where a is at level alpha") {
    const DiscreteOperator op = unit_interval(256, Boundary::neumann);
    DampingSpec spec;
    spec.kind = DampingKind::interval_union;
    spec.height = 1.0;
    spec.intervals = {{0.1, 0.3}, {0.6, 0.9}};
    const DampingProfile p = build_damping(spec, op);
    CHECK(p.alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.vol_F == doctest::Approx(0.5).epsilon(2.0 / 256.0));
    for (int i = 0; i < p.nodal.size(); ++i)
        CHECK(p.F_mask[i] == (p.nodal[i] >= p.alpha - 1e-12));
}

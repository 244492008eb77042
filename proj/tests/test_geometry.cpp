#include <doctest.h>

#include <cmath>

#include "decaylab/damping.hpp"
#include "decaylab/errors.hpp"
#include "decaylab/geometry.hpp"

using namespace decaylab;

namespace {

DomainSpec interval(int n, Boundary bc = Boundary::dirichlet, double L = 1.0) {
    DomainSpec d;
    d.shape = Shape::interval;
    d.boundary = bc;
    d.elements = n;
    d.length = L;
    return d;
}

}  // namespace

TEST_CASE("two-element Dirichlet interval assembles by hand") {
    const DiscreteOperator op = assemble(interval(2), MetricSpec::constant(1.0));
    REQUIRE(op.n_free() == 1);
    CHECK(Eigen::MatrixXd(op.K)(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(Eigen::MatrixXd(op.Mm)(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("circle stiffness annihilates constants") {
    DomainSpec d;
    d.shape = Shape::circle;
    d.boundary = Boundary::periodic;
    d.elements = 32;
    d.length = 2.0 * M_PI;
    const DiscreteOperator op = assemble(d, MetricSpec::constant(1.0));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.n_free());
    CHECK((op.K * ones).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("constant metric scaling: K by 1/sqrt(c), Mm by sqrt(c)") {
    const DiscreteOperator unit = assemble(interval(16), MetricSpec::constant(1.0));
    const DiscreteOperator scaled = assemble(interval(16), MetricSpec::constant(4.0));
    const Eigen::MatrixXd K1 = Eigen::MatrixXd(unit.K), K4 = Eigen::MatrixXd(scaled.K);
    const Eigen::MatrixXd M1 = Eigen::MatrixXd(unit.Mm), M4 = Eigen::MatrixXd(scaled.Mm);
    CHECK((K4 - 0.5 * K1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((M4 - 2.0 * M1).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("symmetry and definiteness of the assembled pair") {
    const MetricSpec g =
        MetricSpec::piecewise_linear({{0.0, 1.0}, {0.4, 2.5}, {1.0, 0.7}});
    for (Boundary bc : {Boundary::dirichlet, Boundary::neumann}) {
        const DiscreteOperator op = assemble(interval(48, bc), g);
        const Eigen::MatrixXd K = Eigen::MatrixXd(op.K), M = Eigen::MatrixXd(op.Mm);
        CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M);
        CHECK(em.eigenvalues()(0) > 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ek(K);
        if (bc == Boundary::dirichlet) {
            CHECK(ek.eigenvalues()(0) > 0.0);
        } else {
            // kernel is exactly the constants
            CHECK(std::abs(ek.eigenvalues()(0)) < 1e-12);
            CHECK(ek.eigenvalues()(1) > 1e-6);
        }
    }
}

TEST_CASE("assembly rejects bad specs") {
    CHECK_THROWS_AS(assemble(interval(1), MetricSpec::constant(1.0)), ConfigError);
    CHECK_THROWS_AS(MetricSpec::constant(-1.0), ConfigError);
    DomainSpec rect = interval(8);
    rect.shape = Shape::rectangle;
    CHECK_THROWS_AS(
        assemble(rect, MetricSpec::piecewise_linear({{0.0, 1.0}, {1.0, 2.0}})),
        ConfigError);
}

TEST_CASE("rectangle Kronecker sum reproduces the square Laplacian spectrum") {
    DomainSpec rect = interval(24);
    rect.shape = Shape::rectangle;
    rect.length_y = 1.0;
    const DiscreteOperator op = assemble(rect, MetricSpec::constant(1.0));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
        Eigen::MatrixXd(op.K), Eigen::MatrixXd(op.Mm));
    const double pi2 = M_PI * M_PI;
    CHECK(es.eigenvalues()(0) == doctest::Approx(2.0 * pi2).epsilon(5e-3));
    CHECK(es.eigenvalues()(1) == doctest::Approx(5.0 * pi2).epsilon(5e-3));
    CHECK(es.eigenvalues()(2) == doctest::Approx(5.0 * pi2).epsilon(5e-3));
}

TEST_CASE("damping matrix: zero, identity and trace oracle") {
    const DiscreteOperator op = assemble(interval(64), MetricSpec::constant(1.0));

    DampingSpec zero;
    zero.kind = DampingKind::constant;
    zero.height = 0.0;
    const DampingProfile pz = build_damping(zero, op);
    CHECK(Eigen::MatrixXd(damping_matrix(op, pz)).cwiseAbs().maxCoeff() == 0.0);

    DampingSpec one;
    one.kind = DampingKind::constant;
    one.height = 1.0;
    const DampingProfile p1 = build_damping(one, op);
    CHECK((Eigen::MatrixXd(damping_matrix(op, p1)) - Eigen::MatrixXd(op.Mm))
              .cwiseAbs()
              .maxCoeff() < 1e-15);

    DampingSpec ind;
    ind.kind = DampingKind::interval_union;
    ind.intervals = {{0.0, 0.5}};
    const DampingProfile pi = build_damping(ind, op);
    const Eigen::MatrixXd D = Eigen::MatrixXd(damping_matrix(op, pi));
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ed(D);
    CHECK(ed.eigenvalues()(0) > -1e-14);

    // independent quadrature oracle for the trace: D_ii = sum over the two
    // adjacent elements of a_mid * h/3 (unit metric, phi_i^2 integral)
    double trace_oracle = 0.0;
    for (const auto& el : op.element_list()) {
        const double amid = 0.5 * (pi.nodal[el.a] + pi.nodal[el.b]);
        if (op.free_dofs[el.a] >= 0) trace_oracle += amid * el.h / 3.0;
        if (op.free_dofs[el.b] >= 0) trace_oracle += amid * el.h / 3.0;
    }
    CHECK(std::abs(D.trace() - trace_oracle) < 1e-12);

    Eigen::VectorXd bad = pi.nodal;
    DampingProfile pbad = pi;
    pbad.nodal[3] = -0.1;
    CHECK_THROWS_AS(damping_matrix(op, pbad), ConfigError);
}

TEST_CASE("assembly is deterministic") {
    const MetricSpec g = MetricSpec::piecewise_linear({{0.0, 1.0}, {0.5, 3.0}, {1.0, 2.0}});
    const DiscreteOperator a = assemble(interval(128), g);
    const DiscreteOperator b = assemble(interval(128), g);
    CHECK((Eigen::MatrixXd(a.K) - Eigen::MatrixXd(b.K)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((Eigen::MatrixXd(a.Mm) - Eigen::MatrixXd(b.Mm)).cwiseAbs().maxCoeff() == 0.0);
}

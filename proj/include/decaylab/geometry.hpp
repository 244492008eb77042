#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace decaylab {

enum class Shape { interval, circle, rectangle };
enum class Boundary { dirichlet, neumann, periodic };

struct DomainSpec {
    Shape shape = Shape::interval;
    Boundary boundary = Boundary::dirichlet;
    int elements = 64;      // per axis for rectangles
    double length = 1.0;    // L, or Lx for rectangles
    double length_y = 1.0;  // rectangles only

    void validate() const;
};

// Positive metric coefficient g(x), stored as piecewise-linear nodal samples.
// The interpolant's Lipschitz constant is recorded at construction.
struct MetricSpec {
    std::vector<std::pair<double, double>> samples;  // (x, g(x)), x ascending

    static MetricSpec constant(double g0);
    static MetricSpec piecewise_linear(std::vector<std::pair<double, double>> samples);

    double value(double x) const;  // clamped pw-linear interpolant
    bool is_constant() const;
    double min_value() const;
    double lipschitz_constant() const;

    void validate() const;
};

// Assembled P1 stiffness/mass pair on the free dofs, plus the mesh metadata
// needed to build further weighted mass matrices (damping, restricted Gram).
struct DiscreteOperator {
    Eigen::SparseMatrix<double> K;   // stiffness, free dofs
    Eigen::SparseMatrix<double> Mm;  // consistent mass, free dofs
    Eigen::VectorXd nodes;           // all node coordinates (1-D; empty for rectangles)
    std::vector<int> free_dofs;      // node index -> position, -1 when eliminated
    DomainSpec domain;
    MetricSpec metric;

    int n_free() const { return static_cast<int>(K.rows()); }
    int n_nodes() const { return static_cast<int>(nodes.size()); }
    double mesh_width() const;
    double volume() const;  // vol_g(M) = int sqrt(g) dx

    // Element list of the 1-D mesh: (left node, right node, x_left, h).
    struct Element {
        int a, b;
        double x0, h;
    };
    std::vector<Element> element_list() const;

    // sum_e w_e * sqrt(g_e) * (h_e/6) [[2,1],[1,2]] with per-element weight w_e,
    // reduced to the free dofs. w empty means w_e = 1 (plain mass matrix).
    Eigen::SparseMatrix<double> weighted_mass(const Eigen::VectorXd& element_weights) const;

    // Restrict a full nodal vector to the free dofs and back.
    Eigen::VectorXd restrict_nodal(const Eigen::VectorXd& full) const;
    Eigen::VectorXd extend_free(const Eigen::VectorXd& reduced) const;
};

DiscreteOperator assemble(const DomainSpec& domain, const MetricSpec& metric);

struct DampingProfile;  // damping.hpp
Eigen::SparseMatrix<double> damping_matrix(const DiscreteOperator& op,
                                           const DampingProfile& profile);

}  // namespace decaylab

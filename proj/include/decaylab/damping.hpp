#pragma once

#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "decaylab/geometry.hpp"

namespace decaylab {

// Disjoint closed intervals on the line, ordered. Used for damping supports
// and observation regions; measures are taken against the metric volume.
struct Region {
    std::vector<std::pair<double, double>> intervals;

    static Region whole(double lo, double hi) { return Region{{{lo, hi}}}; }
    bool contains(double x) const;
    double length() const;
    Region clipped(double lo, double hi) const;
    // covered length of [lo, hi]
    double covered(double lo, double hi) const;
};

// Level-L Smith-Volterra-Cantor set on [lo, hi]: stage j removes a centered
// open interval of length base/4^j from each remaining piece, with base
// scaled so the level-L set has measure exactly `target` (in length).
Region fat_cantor_region(int level, double target, double lo, double hi);

// int_A sqrt(g) dx, exact for the piecewise-linear metric.
double metric_measure(const Region& region, const MetricSpec& metric);

enum class DampingKind { constant, interval_union, bump, fat_cantor };

struct DampingSpec {
    DampingKind kind = DampingKind::constant;
    double height = 1.0;
    std::vector<std::pair<double, double>> intervals;  // interval_union
    double center = 0.5, width = 0.25;                 // bump (cos^2 profile)
    int level = 4;                                     // fat_cantor
    double target_measure = 0.5;                       // fat_cantor
};

struct DampingProfile {
    Eigen::VectorXd nodal;  // a_i >= 0 at mesh nodes
    double alpha = 0.0;     // alpha * 1_F <= a <= beta
    double beta = 0.0;
    double vol_F = 0.0;     // metric measure of F = {a >= alpha}
    std::vector<bool> F_mask;

    // mesh metadata so bounds can be recomputed from the profile alone
    Eigen::VectorXd node_x;
    MetricSpec metric;
    double domain_length = 1.0;
    bool periodic = false;

    bool trivial() const { return beta == 0.0; }
    double integral() const;  // int sqrt(g) a dx (trapezoid on the pw-linear data)
};

DampingProfile build_damping(const DampingSpec& spec, const DiscreteOperator& op);

// (alpha, beta, vol_F) recomputed from the nodal data: beta = max a_i, alpha
// the largest beta/2^j whose superlevel set keeps at least half the measure
// of {a > 0}. Throws TrivialDampingError when a == 0.
std::tuple<double, double, double> damping_bounds(const DampingProfile& profile);

// Metric measure of {pw-linear a >= alpha} (strict > when strict is set).
double superlevel_measure(const DampingProfile& profile, double alpha, bool strict = false);

}  // namespace decaylab

#pragma once

#include <cstddef>

#include "decaylab/resolvent.hpp"
#include "decaylab/semigroup.hpp"

namespace decaylab {

struct DecayFit {
    double p = 2.0;        // log power
    double C_star = 0.0;   // max over the window of E(t) log(2+t)^p / ref_norm^2
    double ref_norm = 0.0; // H^2 x H^1 (wave) or H^2 (schrodinger) data norm
    double t_lo = 0.0, t_hi = 0.0;
    bool bound_satisfied = false;
};

// E(t) <= C_star * ref_norm^2 / log(2+t)^p on the sampled window.
DecayFit fit_log_decay(const EvolutionResult& result, double p, double t_lo = 0.0,
                       double t_hi = std::numeric_limits<double>::infinity());

struct BurqPrediction {
    int semigroup_exponent = 0;  // log power for ||e^{tA}(Id-A)^{-k}||
    int energy_exponent = 0;     // log power for the (squared-norm) energy
};

// exp model: exponents (k, 2k); exp-sqrt model: (2k, 4k).
BurqPrediction burq_prediction(GrowthFit::Model model, int k);

struct MonotoneReport {
    bool ok = true;
    double worst_violation = 0.0;  // relative
    std::size_t index = 0;
};

MonotoneReport check_monotone(const EvolutionResult& result, double rtol = 1e-9);

}  // namespace decaylab

#include "decaylab/decay.hpp"

#include <cmath>

#include "decaylab/errors.hpp"

namespace decaylab {

DecayFit fit_log_decay(const EvolutionResult& result, double p, double t_lo, double t_hi) {
    DecayFit fit;
    fit.p = p;
    fit.ref_norm = result.initial_sobolev;
    if (!(fit.ref_norm > 0.0)) throw ConfigError("fit_log_decay: zero reference norm");

    const double ref2 = fit.ref_norm * fit.ref_norm;
    bool any = false;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < result.times.size(); ++i) {
        const double t = result.times[i];
        if (t < t_lo || t > t_hi) continue;
        any = true;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
        const double v = result.energies[i] * std::pow(std::log(2.0 + t), p) / ref2;
        fit.C_star = std::max(fit.C_star, v);
    }
    if (!any) throw ConfigError("fit_log_decay: empty window");
    fit.t_lo = lo;
    fit.t_hi = hi;
    fit.bound_satisfied = std::isfinite(fit.C_star);
    return fit;
}

BurqPrediction burq_prediction(GrowthFit::Model model, int k) {
    BurqPrediction p;
    p.semigroup_exponent = model == GrowthFit::Model::exp ? k : 2 * k;
    p.energy_exponent = 2 * p.semigroup_exponent;
    return p;
}

MonotoneReport check_monotone(const EvolutionResult& result, double rtol) {
    MonotoneReport rep;
    const double scale = result.energies.empty() ? 1.0 : std::max(1e-300, result.energies[0]);
    for (std::size_t i = 1; i < result.energies.size(); ++i) {
        const double rise = (result.energies[i] - result.energies[i - 1]) / scale;
        if (rise > rep.worst_violation) {
            rep.worst_violation = rise;
            rep.index = i;
        }
    }
    rep.ok = rep.worst_violation <= rtol;
    return rep;
}

}  // namespace decaylab

#include "bfosim/ensemble.hpp"

#include <cmath>
#include <string>

#include "bfosim/errors.hpp"
#include "bfosim/rng.hpp"

namespace bfosim {

double mean_position_m(const VacancyEnsemble& ensemble) {
    if (ensemble.mobile_positions_m.empty()) {
        throw StateError("ensemble is empty");
    }
    double sum = 0.0;
    for (const double x : ensemble.mobile_positions_m) sum += x;
    return sum / static_cast<double>(ensemble.mobile_positions_m.size());
}

double internal_state(const VacancyEnsemble& ensemble) {
    return (mean_position_m(ensemble) - ensemble.initial_mean_position_m) /
           ensemble.initial_mean_position_m;
}

VacancyEnsemble init_ensemble(std::size_t n_super, double length_m,
                              double physical_defect_count,
                              double target_mean_m, std::uint64_t seed) {
    if (n_super < 2) {
        throw ConfigError("n_particles: need at least 2 super-particles");
    }
    if (target_mean_m < 0.0 || target_mean_m >= length_m) {
        throw ConfigError("target_mean_position_m: must be 0 or within (0, length)");
    }

    VacancyEnsemble ensemble;
    ensemble.particle_weight = physical_defect_count / static_cast<double>(n_super);
    ensemble.mobile_positions_m.resize(n_super);
    ensemble.fixed_positions_m.resize(n_super);

    rng::SequencedRng mobile(seed, rng::Stream::init_mobile);
    rng::SequencedRng fixed(seed, rng::Stream::init_fixed);
    for (std::size_t i = 0; i < n_super; ++i) {
        ensemble.mobile_positions_m[i] = mobile.uniform() * length_m;
        ensemble.fixed_positions_m[i] = fixed.uniform() * length_m;
    }

    if (target_mean_m > 0.0) {
        // Multiplicative rescale toward the requested mean; the clamp only
        // matters when scaling up, so a few passes settle it.
        for (int pass = 0; pass < 64; ++pass) {
            const double mean = mean_position_m(ensemble);
            if (std::fabs(mean - target_mean_m) <= 1.0e-12 * length_m) break;
            const double factor = target_mean_m / mean;
            for (double& x : ensemble.mobile_positions_m) {
                x = std::fmin(x * factor, length_m);
            }
        }
        const double achieved = mean_position_m(ensemble);
        if (std::fabs(achieved - target_mean_m) > 1.0e-6 * length_m) {
            throw ConfigError(
                "target_mean_position_m: could not rescale ensemble to " +
                std::to_string(target_mean_m) + " m (reached " +
                std::to_string(achieved) + " m)");
        }
    }

    ensemble.initial_mean_position_m = mean_position_m(ensemble);
    return ensemble;
}

}  // namespace bfosim

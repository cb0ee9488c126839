#pragma once

// Super-particle ensemble: mobile positively charged vacancies plus an
// equal number of fixed negative defects that keep the layer neutral.

#include <cstdint>
#include <vector>

namespace bfosim {

struct VacancyEnsemble {
    std::vector<double> mobile_positions_m;  // measured from the top interface
    std::vector<double> fixed_positions_m;   // never move after init
    double particle_weight = 0.0;            // physical defects per super-particle
    double initial_mean_position_m = 0.0;    // d_r, reference for q(t)

    std::size_t size() const { return mobile_positions_m.size(); }
};

// Arithmetic mean of the mobile positions. Throws StateError when empty.
double mean_position_m(const VacancyEnsemble& ensemble);

// q(t) = (d(t) - d_r) / d_r.
double internal_state(const VacancyEnsemble& ensemble);

// Uniform random placement of both species over [0, length]; optionally
// rescales mobile positions so their mean matches target_mean_m (> 0).
VacancyEnsemble init_ensemble(std::size_t n_super, double length_m,
                              double physical_defect_count,
                              double target_mean_m, std::uint64_t seed);

}  // namespace bfosim

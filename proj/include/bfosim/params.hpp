#pragma once

// Device parameter set: physical constants of the stack plus the fitting
// parameters of the kinetic and contact models. Defaults describe the
// reference 600 nm Au/BFO/Pt/Ti device at room temperature.

#include <string>

#include "bfosim/constants.hpp"

namespace bfosim {

struct DeviceParameters {
    double temperature_K = 298.0;            // T
    double phonon_freq_Hz = 1.0e12;          // nu0, hop attempt frequency
    double lattice_const_m = 0.56e-9;        // d, hop distance
    double area_m2 = 4.0e-8;                 // A_d (0.04 mm^2)
    double rel_permittivity = 52.0;          // eps_r of the oxide
    double conductivity_S_per_m = 7.0e-4;    // sigma, oxide bulk
    double length_m = 600.0e-9;              // l, oxide thickness
    double defect_density_per_m3 = 2.0e22;   // rho (2e16 cm^-3)

    double phi0_top_eV = 0.8;                // Au/BFO barrier height
    double n0_top = 4.2;                     // Au/BFO ideality factor
    double phi0_bot_eV = 0.85;               // BFO/Pt barrier height
    double n0_bot = 4.5;                     // BFO/Pt ideality factor

    // Fitting parameters, calibrated against the reference switching run
    // (see tests/acceptance). lambda_b/lambda_n couple the contacts to the
    // internal state q; signs differ per contact (the bottom barrier falls
    // as vacancies accumulate, the top barely reacts). lambda_n_bot is
    // capped so n_eff stays >= 1 over the whole reachable q range.
    double lambda_U = 0.0012;                // activation tilt per volt
    double lambda_b_top = 0.02;
    double lambda_b_bot = -0.85;
    double lambda_n_top = 0.02;
    double lambda_n_bot = -0.70;
    double lambda_T = 0.0;                   // thermal friction on v_D
    double delta_max = 0.2;                  // stochastic step fraction

    int charge_number = 1;                   // z of the mobile vacancy
    double richardson_A_per_m2K2 = 1.20173e6;  // effective A*
    // Reverse-bias barrier softening. Large values make the blocking
    // contact leak at high bias, which is what lets the bulk see enough
    // field to move vacancies; small values freeze the device.
    double alpha_r_eV_per_sqrtV = 0.8;

    // Optional: rescale the initial ensemble so its mean position matches
    // this value (0 disables; used to pin a measured d_r).
    double target_mean_position_m = 0.0;

    double thermal_energy_eV() const {
        return constants::k_boltzmann_eV_per_K * temperature_K;
    }
    double permittivity_F_per_m() const {
        return constants::vacuum_permittivity_F_per_m * rel_permittivity;
    }
    double bulk_resistance_ohm() const {
        return length_m / (conductivity_S_per_m * area_m2);
    }
    double physical_defect_count() const {
        return defect_density_per_m3 * area_m2 * length_m;
    }

    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Activation-energy profile constants of the graded oxide: a flat floor
// over most of the layer, then a linear rise across the final segment
// (the Ti-rich region). The ramp start scales with device length.
struct ActivationProfile {
    static constexpr double floor_eV = 0.55;
    static constexpr double peak_eV = 0.75;
    static constexpr double ramp_start_fraction = 550.0 / 600.0;
};

}  // namespace bfosim

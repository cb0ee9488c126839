#include "bfosim/params.hpp"

#include <cmath>

#include "bfosim/errors.hpp"

namespace bfosim {

namespace {

void require(bool ok, const std::string& field, const std::string& bound) {
    if (!ok) throw ConfigError("device." + field + ": " + bound);
}

void require_finite(double v, const std::string& field) {
    if (!std::isfinite(v)) throw ConfigError("device." + field + ": must be finite");
}

}  // namespace

void DeviceParameters::validate() const {
    require_finite(temperature_K, "temperature_K");
    require(temperature_K > 0.0, "temperature_K", "must be > 0");
    require_finite(phonon_freq_Hz, "phonon_freq_Hz");
    require(phonon_freq_Hz > 0.0, "phonon_freq_Hz", "must be > 0");
    require_finite(lattice_const_m, "lattice_const_m");
    require(lattice_const_m > 0.0, "lattice_const_m", "must be > 0");
    require_finite(area_m2, "area_m2");
    require(area_m2 > 0.0, "area_m2", "must be > 0");
    require_finite(rel_permittivity, "rel_permittivity");
    require(rel_permittivity > 0.0, "rel_permittivity", "must be > 0");
    require_finite(conductivity_S_per_m, "conductivity_S_per_m");
    require(conductivity_S_per_m > 0.0, "conductivity_S_per_m", "must be > 0");
    require_finite(length_m, "length_m");
    require(length_m > 0.0, "length_m", "must be > 0");
    require_finite(defect_density_per_m3, "defect_density_per_m3");
    require(defect_density_per_m3 > 0.0, "defect_density_per_m3", "must be > 0");

    require_finite(phi0_top_eV, "phi0_top_eV");
    require(phi0_top_eV > 0.0, "phi0_top_eV", "must be > 0");
    require_finite(phi0_bot_eV, "phi0_bot_eV");
    require(phi0_bot_eV > 0.0, "phi0_bot_eV", "must be > 0");
    require_finite(n0_top, "n0_top");
    require(n0_top >= 1.0, "n0_top", "ideality factor must be >= 1");
    require_finite(n0_bot, "n0_bot");
    require(n0_bot >= 1.0, "n0_bot", "ideality factor must be >= 1");

    require_finite(lambda_U, "lambda_U");
    require(lambda_U >= 0.0 && lambda_U <= 1.0, "lambda_U", "must be in [0, 1]");
    require_finite(lambda_T, "lambda_T");
    require(lambda_T >= 0.0 && lambda_T <= 1.0, "lambda_T", "must be in [0, 1]");
    require_finite(delta_max, "delta_max");
    require(delta_max >= 0.0 && delta_max <= 1.0, "delta_max", "must be in [0, 1]");
    require_finite(lambda_b_top, "lambda_b_top");
    require_finite(lambda_b_bot, "lambda_b_bot");
    require_finite(lambda_n_top, "lambda_n_top");
    require_finite(lambda_n_bot, "lambda_n_bot");

    require(charge_number != 0, "charge_number", "must be non-zero");
    require_finite(richardson_A_per_m2K2, "richardson_A_per_m2K2");
    require(richardson_A_per_m2K2 > 0.0, "richardson_A_per_m2K2", "must be > 0");
    require_finite(alpha_r_eV_per_sqrtV, "alpha_r_eV_per_sqrtV");
    require(alpha_r_eV_per_sqrtV >= 0.0, "alpha_r_eV_per_sqrtV", "must be >= 0");

    require_finite(target_mean_position_m, "target_mean_position_m");
    require(target_mean_position_m >= 0.0 && target_mean_position_m < length_m,
            "target_mean_position_m", "must be 0 (disabled) or inside (0, length_m)");
}

}  // namespace bfosim

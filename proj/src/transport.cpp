#include "bfosim/transport.hpp"

#include <cmath>

#include "bfosim/contacts.hpp"
#include "bfosim/errors.hpp"

namespace bfosim {

void TransportConfig::validate() const {
    if (!(dt_s > 0.0)) throw ConfigError("transport.dt_s: must be > 0");
    if (!(retention_move_prob >= 0.0 && retention_move_prob <= 1.0)) {
        throw ConfigError("transport.retention_move_prob: must be in [0, 1]");
    }
    if (!(exp_arg_bound > 0.0)) {
        throw ConfigError("transport.exp_arg_bound: must be > 0");
    }
    if (max_substeps < 1) throw ConfigError("transport.max_substeps: must be >= 1");
}

namespace {

kernels::TransportCoeffs profile_coeffs(const DeviceParameters& p) {
    kernels::TransportCoeffs c;
    c.ua_flat_eV = ActivationProfile::floor_eV;
    c.ua_rise_eV = ActivationProfile::peak_eV - ActivationProfile::floor_eV;
    c.ramp_start_m = ActivationProfile::ramp_start_fraction * p.length_m;
    c.inv_ramp_len = 1.0 / (p.length_m - c.ramp_start_m);
    c.inv_length = 1.0 / p.length_m;
    c.length_m = p.length_m;
    return c;
}

}  // namespace

double activation_profile(double x_m, const DeviceParameters& params) {
    if (x_m < 0.0 || x_m > params.length_m) {
        throw DomainError("activation_profile: position outside [0, length]");
    }
    return kernels::ref_activation_profile(x_m, profile_coeffs(params));
}

double effective_activation(double u_a_eV, double v_device_V, double x_m,
                            const DeviceParameters& params) {
    if (x_m < 0.0 || x_m > params.length_m) {
        throw DomainError("effective_activation: position outside [0, length]");
    }
    return u_a_eV + params.lambda_U * v_device_V * (1.0 - x_m / params.length_m);
}

double drift_velocity(double field_V_per_m, double u_a_eff_eV,
                      const DeviceParameters& params, double exp_arg_bound) {
    kernels::TransportCoeffs c = profile_coeffs(params);
    c.dt_s = 1.0;  // displacement over unit time = velocity
    c.prefactor_m_per_s =
        params.phonon_freq_Hz * params.lattice_const_m * (1.0 - params.lambda_T);
    const double kT = params.thermal_energy_eV();
    c.inv_kT_eV = 1.0 / kT;
    c.field_coeff =
        std::abs(params.charge_number) * params.lattice_const_m / (2.0 * kT);
    c.exp_arg_bound = exp_arg_bound;
    std::uint64_t clamps = 0;
    const double v = kernels::ref_drift_displacement(field_V_per_m, u_a_eff_eV, c, &clamps);
    if (clamps > 0) diagnostics::add_exp_clamps(clamps);
    return v;
}

double perturbed_position(double x_m, double dx_det_m, double r, double delta_max,
                          double length_m) {
    kernels::TransportCoeffs c;
    c.delta_max = delta_max;
    c.length_m = length_m;
    return kernels::ref_jitter_clamp(x_m, dx_det_m, r, c);
}

kernels::TransportCoeffs make_transport_coeffs(const DeviceParameters& params,
                                               const TransportConfig& cfg,
                                               double v_device_V, double dt_s,
                                               const Grid1D& grid) {
    kernels::TransportCoeffs c = profile_coeffs(params);
    c.dt_s = dt_s;
    c.prefactor_m_per_s =
        params.phonon_freq_Hz * params.lattice_const_m * (1.0 - params.lambda_T);
    const double kT = params.thermal_energy_eV();
    c.inv_kT_eV = 1.0 / kT;
    c.field_coeff =
        std::abs(params.charge_number) * params.lattice_const_m / (2.0 * kT);
    c.bias_coeff_eV = params.lambda_U * v_device_V;
    c.delta_max = params.delta_max;
    c.exp_arg_bound = cfg.exp_arg_bound;
    c.inv_dx = grid.inv_dx();
    c.dx_m = grid.dx_m;
    return c;
}

double substep_displacement(double x0_m, const Grid1D& grid,
                            const kernels::TransportCoeffs& coeffs,
                            int max_substeps, std::uint64_t* clamp_count) {
    const double* node_field = grid.field_V_per_m.data();
    double x = x0_m;
    double remaining = coeffs.dt_s;

    kernels::TransportCoeffs per_unit = coeffs;
    per_unit.dt_s = 1.0;

    for (int iter = 0; iter < max_substeps && remaining > 0.0; ++iter) {
        const double field =
            kernels::ref_gather(node_field, grid.n_nodes, coeffs.inv_dx, x);
        const double ua = kernels::ref_activation_eff(x, coeffs);
        const double v =
            kernels::ref_drift_displacement(field, ua, per_unit, clamp_count);
        if (v == 0.0) break;

        double h = remaining;
        if (std::fabs(v) * h > coeffs.dx_m) h = coeffs.dx_m / std::fabs(v);
        x += v * h;
        remaining -= h;
        if (x <= 0.0) {
            x = 0.0;
            if (v < 0.0) break;
        } else if (x >= coeffs.length_m) {
            x = coeffs.length_m;
            if (v > 0.0) break;
        }
    }
    return x - x0_m;
}

double hop_attempt_rate(double u_a_eV, const DeviceParameters& params) {
    return params.phonon_freq_Hz *
           std::exp(-u_a_eV / params.thermal_energy_eV());
}

}  // namespace bfosim

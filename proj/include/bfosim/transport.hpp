#pragma once

// Vacancy kinetics: Arrhenius drift under the local field and effective
// activation energy, the stochastic step perturbation, cell-limited
// sub-stepping, and the gated retention hop rule.

#include <cstdint>

#include "bfosim/field.hpp"
#include "bfosim/params.hpp"

namespace bfosim {

struct TransportConfig {
    double dt_s = 1.0e-3;                  // base step duration
    double retention_move_prob = 1.0 / 3.0;  // beta gate for retention moves
    double exp_arg_bound = 700.0;          // clamp for exponential arguments
    int max_substeps = 100000;             // cell-crossing guard per push

    void validate() const;  // throws ConfigError
};

// Graded activation energy U_A(x); throws DomainError outside [0, length].
double activation_profile(double x_m, const DeviceParameters& params);

// U_A,eff = U_A + lambda_U * V_device * (1 - x / l).
double effective_activation(double u_a_eV, double v_device_V, double x_m,
                            const DeviceParameters& params);

// Hop drift velocity under a local field [V/m] and an effective activation
// energy [eV], including the (1 - lambda_T) friction factor.
double drift_velocity(double field_V_per_m, double u_a_eff_eV,
                      const DeviceParameters& params,
                      double exp_arg_bound = 700.0);

// Pure form of the stochastic perturbation used by the push:
// x' = clamp(x + dx_det + (r - 0.5) * delta * |dx_det|).
double perturbed_position(double x_m, double dx_det_m, double r, double delta_max,
                          double length_m);

// Frozen transport coefficients for one step.
kernels::TransportCoeffs make_transport_coeffs(const DeviceParameters& params,
                                               const TransportConfig& cfg,
                                               double v_device_V, double dt_s,
                                               const Grid1D& grid);

// Re-integrates one particle whose full-step displacement exceeds a grid
// cell, limiting each substep to one cell width and re-sampling the frozen
// nodal field along the way. Returns the total deterministic displacement.
double substep_displacement(double x0_m, const Grid1D& grid,
                            const kernels::TransportCoeffs& coeffs,
                            int max_substeps, std::uint64_t* clamp_count);

// Thermal hop attempt rate [1/s] at one site: nu0 * exp(-U_A / kT).
double hop_attempt_rate(double u_a_eV, const DeviceParameters& params);

}  // namespace bfosim

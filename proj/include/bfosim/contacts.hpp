#pragma once

// Schottky contact model (thermionic emission with a tunnelling-corrected
// ideality factor and a reverse-bias softening term), Ohmic bulk, and the
// series operating-point solve for a given applied device voltage.

#include <atomic>
#include <cstdint>

#include "bfosim/params.hpp"

namespace bfosim {

// Counts exponential arguments clamped anywhere in the circuit model.
// Purely diagnostic; reset between runs if a per-run figure is wanted.
namespace diagnostics {
std::uint64_t exp_clamp_count();
void add_exp_clamps(std::uint64_t n);
void reset_exp_clamps();
}  // namespace diagnostics

struct ContactModel {
    double phi0_eV = 0.8;     // zero-state barrier height
    double n0 = 4.2;          // zero-state ideality factor
    double lambda_b = 0.0;    // barrier response to q (signed)
    double lambda_n = 0.0;    // ideality response to q (signed)
    double alpha_r_eV_per_sqrtV = 0.0;  // reverse-bias barrier softening
    const char* label = "contact";
};

struct EffectiveContact {
    double phi_eff_eV;
    double n_eff;
};

// phi_eff = phi0 (1 + lambda_b q), n_eff = n0 (1 + lambda_n q).
// Throws StateError when the result leaves the physical range.
EffectiveContact effective_barrier(const ContactModel& contact, double q);

// Diode current for a junction voltage v_sc (volts, signed):
//   I = I_R(v_sc) * (exp(e v_sc / (n k T)) - 1)
//   I_R = A A* T^2 exp(-phi/kT), times exp(alpha_r sqrt|v|/kT) for v < 0.
double schottky_current(double v_sc_V, double phi_eff_eV, double n_eff,
                        double temperature_K, double area_m2,
                        double alpha_r_eV_per_sqrtV,
                        double richardson_A_per_m2K2,
                        double exp_arg_bound = 700.0);

// Ohmic current through the oxide bulk.
double bulk_current(double v_bfo_V, const DeviceParameters& params);

struct CircuitState {
    double v_sc_top_V = 0.0;
    double v_bfo_V = 0.0;
    double v_sc_bot_V = 0.0;
    double current_A = 0.0;
    double phi_eff_top_eV = 0.0;
    double phi_eff_bot_eV = 0.0;
    double n_eff_top = 0.0;
    double n_eff_bot = 0.0;
    double kvl_residual_rel = 0.0;
    double kcl_residual_rel = 0.0;
    int iterations = 0;
};

struct PartitionOptions {
    double kvl_tol_rel = 1.0e-12;  // on |sum V - V_device| / max(1, |V_device|)
    int max_iterations = 200;
    double exp_arg_bound = 700.0;
};

// Finds the unique series operating point by bisecting on the device
// current: V_device = V_SC,t + V_BFO - V_SC,b with one current I through
// all elements (the bottom diode carries -I in its own convention).
// Throws SolverError (with the last residual) on non-convergence.
CircuitState solve_partition(double v_device_V, double q,
                             const ContactModel& top, const ContactModel& bottom,
                             const DeviceParameters& params,
                             const PartitionOptions& opts = {});

// Contact models assembled from the device parameter set.
ContactModel top_contact(const DeviceParameters& params);
ContactModel bottom_contact(const DeviceParameters& params);

}  // namespace bfosim

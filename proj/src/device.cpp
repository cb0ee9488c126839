#include "bfosim/device.hpp"

#include <algorithm>
#include <cmath>

#include "bfosim/errors.hpp"

namespace bfosim {

Device::Device(const DeviceParameters& params, const TransportConfig& transport,
               int n_nodes, std::size_t n_super, std::uint64_t seed,
               kernels::Kind kernel)
    : params_(params),
      transport_(transport),
      grid_(n_nodes, params.length_m),
      rng_(seed),
      ops_(&kernels::select(kernel)) {
    params_.validate();
    transport_.validate();

    top_ = top_contact(params_);
    bottom_ = bottom_contact(params_);

    ensemble_ = init_ensemble(n_super, params_.length_m,
                              params_.physical_defect_count(),
                              params_.target_mean_position_m, seed);

    // Contact response must stay physical over the whole reachable range
    // of q: d in [0, length] maps to q in [-1, length/d_r - 1].
    const double q_max = params_.length_m / ensemble_.initial_mean_position_m - 1.0;
    for (const double q : {-1.0, q_max}) {
        try {
            effective_barrier(top_, q);
            effective_barrier(bottom_, q);
        } catch (const StateError& e) {
            throw ConfigError(std::string("contact coupling unreachable-state check: ") +
                              e.what());
        }
    }

    state_.q = 0.0;
    state_.mean_position_m = ensemble_.initial_mean_position_m;
    state_.activation_profile_eV.resize(static_cast<std::size_t>(grid_.n_nodes));
    for (int i = 0; i < grid_.n_nodes; ++i) {
        const double x = std::min(grid_.dx_m * i, params_.length_m);
        state_.activation_profile_eV[static_cast<std::size_t>(i)] =
            activation_profile(x, params_);
    }

    jitter_.resize(n_super);
    x_next_.resize(n_super);
    dx_det_.resize(n_super);
}

void Device::deposit_species() {
    field::clear_charge(grid_);
    const double e = constants::elementary_charge_C;
    const double mobile_charge =
        ensemble_.particle_weight * params_.charge_number * e;
    field::deposit_charge(ensemble_.mobile_positions_m.data(), ensemble_.size(),
                          mobile_charge, params_.area_m2, grid_, *ops_);
    field::deposit_charge(ensemble_.fixed_positions_m.data(), ensemble_.size(),
                          -mobile_charge, params_.area_m2, grid_, *ops_);
}

CircuitState Device::solve_circuit(double v_device_V) {
    PartitionOptions opts;
    opts.exp_arg_bound = transport_.exp_arg_bound;
    try {
        return solve_partition(v_device_V, state_.q, top_, bottom_, params_, opts);
    } catch (const SolverError& e) {
        throw SolverError("step " + std::to_string(state_.step_index) + " (t = " +
                              std::to_string(state_.time_s) + " s): " + e.what(),
                          e.last_residual);
    }
}

TraceRecord Device::step(double v_device_V) {
    return step(v_device_V, transport_.dt_s);
}

TraceRecord Device::step(double v_device_V, double dt_s) {
    if (!(dt_s > 0.0)) throw ConfigError("step: dt must be > 0");

    deposit_species();
    const CircuitState circuit = solve_circuit(v_device_V);

    // Dirichlet boundary potentials from the circuit partition.
    field::solve_poisson(grid_, v_device_V - circuit.v_sc_top_V,
                         -circuit.v_sc_bot_V, params_.permittivity_F_per_m());
    field::electric_field(grid_);

    const kernels::TransportCoeffs coeffs =
        make_transport_coeffs(params_, transport_, v_device_V, dt_s, grid_);

    const std::size_t n = ensemble_.size();
    for (std::size_t i = 0; i < n; ++i) {
        jitter_[i] = rng_.uniform(rng::Stream::push_jitter, state_.step_index, i, 0);
    }

    auto& x = ensemble_.mobile_positions_m;
    const std::uint64_t clamps =
        ops_->advance(x.data(), jitter_.data(), n, grid_.field_V_per_m.data(),
                      grid_.n_nodes, coeffs, x_next_.data(), dx_det_.data());
    std::uint64_t sub_clamps = 0;
    for (std::size_t i = 0; i < n; ++i) {
        // Re-integrate cell-skipping particles with per-cell substeps.
        if (std::fabs(dx_det_[i]) > coeffs.dx_m) {
            const double dx_total = substep_displacement(
                x[i], grid_, coeffs, transport_.max_substeps, &sub_clamps);
            x_next_[i] = kernels::ref_jitter_clamp(x[i], dx_total, jitter_[i], coeffs);
        }
    }
    if (clamps + sub_clamps > 0) diagnostics::add_exp_clamps(clamps + sub_clamps);
    x.swap(x_next_);

    TraceRecord rec;
    rec.time_s = state_.time_s;
    rec.v_device_V = v_device_V;
    rec.i_device_A = circuit.current_A;
    rec.q = state_.q;
    rec.d_mean_m = state_.mean_position_m;
    rec.v_sc_top_V = circuit.v_sc_top_V;
    rec.v_bfo_V = circuit.v_bfo_V;
    rec.v_sc_bot_V = circuit.v_sc_bot_V;
    rec.phi_eff_top_eV = circuit.phi_eff_top_eV;
    rec.phi_eff_bot_eV = circuit.phi_eff_bot_eV;
    rec.n_eff_top = circuit.n_eff_top;
    rec.n_eff_bot = circuit.n_eff_bot;

    state_.mean_position_m = mean_position_m(ensemble_);
    state_.q = internal_state(ensemble_);
    state_.time_s += dt_s;
    state_.step_index += 1;
    return rec;
}

void Device::retention_evolve(double dt_s) {
    if (!(dt_s > 0.0)) throw ConfigError("retention_evolve: dt must be > 0");

    // Zero external bias: only the space-charge field acts.
    deposit_species();
    field::solve_poisson(grid_, 0.0, 0.0, params_.permittivity_F_per_m());
    field::electric_field(grid_);

    const kernels::TransportCoeffs coeffs =
        make_transport_coeffs(params_, transport_, 0.0, dt_s, grid_);
    kernels::TransportCoeffs per_unit = coeffs;
    per_unit.dt_s = 1.0;

    const double hop_m = params_.lattice_const_m;
    std::uint64_t clamps = 0;
    const std::uint64_t read_index = state_.retention_index;

    for (std::size_t i = 0; i < ensemble_.size(); ++i) {
        const double beta =
            rng_.uniform(rng::Stream::retention, read_index, i, 0);
        if (beta >= transport_.retention_move_prob) continue;

        double& x = ensemble_.mobile_positions_m[i];

        const double field = kernels::ref_gather(grid_.field_V_per_m.data(),
                                                 grid_.n_nodes, coeffs.inv_dx, x);
        const double ua = kernels::ref_activation_eff(x, coeffs);
        const double v = kernels::ref_drift_displacement(field, ua, per_unit, &clamps);
        double dx_det = v * dt_s;
        if (std::fabs(dx_det) > coeffs.dx_m) {
            dx_det = substep_displacement(x, grid_, coeffs,
                                          transport_.max_substeps, &clamps);
        }
        x = std::clamp(x + dx_det, 0.0, params_.length_m);

        // Unbiased thermal hop, attempt probability min(1, rate * dt).
        const double p_hop =
            std::min(1.0, hop_attempt_rate(kernels::ref_activation_profile(x, coeffs),
                                           params_) *
                              dt_s);
        if (rng_.uniform(rng::Stream::retention, read_index, i, 1) < p_hop) {
            const double sign =
                rng_.uniform(rng::Stream::retention, read_index, i, 2) < 0.5 ? -1.0
                                                                             : 1.0;
            x = std::clamp(x + sign * hop_m, 0.0, params_.length_m);
        }
    }
    if (clamps > 0) diagnostics::add_exp_clamps(clamps);

    state_.mean_position_m = mean_position_m(ensemble_);
    state_.q = internal_state(ensemble_);
    state_.time_s += dt_s;
    state_.retention_index += 1;
}

TraceRecord Device::read(double v_read_V) {
    const CircuitState circuit = solve_circuit(v_read_V);
    TraceRecord rec;
    rec.time_s = state_.time_s;
    rec.v_device_V = v_read_V;
    rec.i_device_A = circuit.current_A;
    rec.q = state_.q;
    rec.d_mean_m = state_.mean_position_m;
    rec.v_sc_top_V = circuit.v_sc_top_V;
    rec.v_bfo_V = circuit.v_bfo_V;
    rec.v_sc_bot_V = circuit.v_sc_bot_V;
    rec.phi_eff_top_eV = circuit.phi_eff_top_eV;
    rec.phi_eff_bot_eV = circuit.phi_eff_bot_eV;
    rec.n_eff_top = circuit.n_eff_top;
    rec.n_eff_bot = circuit.n_eff_bot;
    return rec;
}

}  // namespace bfosim

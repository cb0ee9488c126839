#pragma once

// One memristive device instance: parameter set, particle ensemble, grid,
// internal state q(t), and the per-step loop coupling field solve,
// circuit partition, and vacancy transport.

#include <cstdint>
#include <vector>

#include "bfosim/contacts.hpp"
#include "bfosim/ensemble.hpp"
#include "bfosim/field.hpp"
#include "bfosim/rng.hpp"
#include "bfosim/transport.hpp"

namespace bfosim {

// One timestep's observables, in trace-column order.
struct TraceRecord {
    double time_s = 0.0;
    double v_device_V = 0.0;
    double i_device_A = 0.0;
    double q = 0.0;
    double d_mean_m = 0.0;
    double v_sc_top_V = 0.0;
    double v_bfo_V = 0.0;
    double v_sc_bot_V = 0.0;
    double phi_eff_top_eV = 0.0;
    double phi_eff_bot_eV = 0.0;
    double n_eff_top = 0.0;
    double n_eff_bot = 0.0;
};

struct DeviceState {
    double q = 0.0;
    double mean_position_m = 0.0;
    double time_s = 0.0;
    std::uint64_t step_index = 0;
    std::uint64_t retention_index = 0;
    std::vector<double> activation_profile_eV;  // per grid node, zero bias
};

class Device {
public:
    Device(const DeviceParameters& params, const TransportConfig& transport,
           int n_nodes, std::size_t n_super, std::uint64_t seed,
           kernels::Kind kernel = kernels::Kind::auto_detect);

    // One full step at the configured dt: activation update, deposition,
    // circuit partition, Poisson solve, field gather, push, q update.
    // The returned record holds the state that drove this step's circuit.
    TraceRecord step(double v_device_V);
    TraceRecord step(double v_device_V, double dt_s);

    // Zero-bias retention evolution over dt: beta-gated drift in the
    // internal field plus a thermally activated +-d hop per particle.
    void retention_evolve(double dt_s);

    // Non-perturbative read: circuit solve at v_read with positions frozen.
    TraceRecord read(double v_read_V);

    const DeviceParameters& params() const { return params_; }
    const TransportConfig& transport() const { return transport_; }
    const VacancyEnsemble& ensemble() const { return ensemble_; }
    const Grid1D& grid() const { return grid_; }
    const DeviceState& state() const { return state_; }
    const char* kernel_name() const { return ops_->name; }
    std::uint64_t seed() const { return rng_.seed(); }

private:
    void deposit_species();
    CircuitState solve_circuit(double v_device_V);

    DeviceParameters params_;
    TransportConfig transport_;
    ContactModel top_;
    ContactModel bottom_;
    VacancyEnsemble ensemble_;
    Grid1D grid_;
    DeviceState state_;
    rng::CounterRng rng_;
    const kernels::KernelOps* ops_;

    std::vector<double> jitter_;   // per-particle uniforms for one step
    std::vector<double> x_next_;
    std::vector<double> dx_det_;
};

}  // namespace bfosim

#pragma once

// Experiment harness: I-V sweeps, cycle-to-cycle and device-to-device
// variability, temperature series, amplitude study, retention protocol,
// and the derived metrics used to compare runs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfosim/device.hpp"
#include "bfosim/waveform.hpp"

namespace bfosim {

// Everything needed to instantiate one device.
struct SimSetup {
    DeviceParameters device;
    TransportConfig transport;
    int n_nodes = 601;
    std::size_t n_particles = 5000;
    kernels::Kind kernel = kernels::Kind::auto_detect;
};

Device make_device(const SimSetup& setup, std::uint64_t seed);

// Derived observables of one sweep trace.
struct Metrics {
    double switching_voltage_V = 0.0;  // V at max dI/dV on the rising set branch
    double hrs_lrs_ratio_at_read = 1.0;  // return- over forward-branch current
    double loop_area_VA = 0.0;           // |closed trapezoidal integral of I dV|
    double q_final = 0.0;
    double d_final_m = 0.0;
    bool no_switch = false;
};

Metrics compute_metrics(const std::vector<TraceRecord>& trace,
                        double read_voltage_V = 2.0);

struct SweepSpec {
    double v_max_V = 8.5;
    double rate_V_per_s = 3.6;  // 0.36 V per 100 ms
    int n_cycles = 1;
};

// Steps the device over every sample; one record per sample.
// Solver failures are rethrown with the sample index attached.
std::vector<TraceRecord> run_iv_sweep(Device& device,
                                      const std::vector<double>& samples);

struct CycleResult {
    std::vector<TraceRecord> trace;
    Metrics metrics;
};

// Consecutive cycles on one device instance, no re-initialisation.
std::vector<CycleResult> run_c2c(const SimSetup& setup, const SweepSpec& sweep,
                                 int n_cycles, std::uint64_t seed);

// Explicit per-device rows (measured geometry set).
struct DeviceRow {
    double target_mean_m = 0.0;  // 0: use the random-placement mean
    double length_m = 600.0e-9;
    double density_per_m3 = 2.0e22;
};

std::vector<DeviceRow> reference_device_rows();  // the four measured devices

// Truncated-Gaussian device sampling.
struct VariabilitySpec {
    int n_devices = 4;
    double length_mean_m = 600.0e-9;
    double length_sd_m = 7.0e-9;
    double density_mean_per_m3 = 2.0e22;
    double density_sd_per_m3 = 4.5e21;
    double truncation_sd = 3.0;

    void validate() const;
};

struct D2DResult {
    DeviceRow row;
    std::uint64_t seed = 0;
    CycleResult result;
};

// Independent device instances, one sweep each. Per-device seeds derive
// from the master seed by counter, so adding devices never reshuffles
// earlier ones.
std::vector<D2DResult> run_d2d(const SimSetup& setup,
                               const std::vector<DeviceRow>& rows,
                               const SweepSpec& sweep, std::uint64_t master_seed);

std::vector<DeviceRow> sample_device_rows(const VariabilitySpec& spec,
                                          std::uint64_t master_seed);

struct TemperatureRow {
    double temperature_K = 298.0;
    double rel_permittivity = 52.0;
    double conductivity_S_per_m = 8.0e-4;
    double lambda_T = 0.0;
};

std::vector<TemperatureRow> reference_temperature_rows();

struct TemperatureResult {
    TemperatureRow row;
    CycleResult with_friction;     // lambda_T as given
    CycleResult without_friction;  // lambda_T = 0
};

// One sweep per row at the writing amplitude (default +-11 V), run both
// with and without the thermal friction factor.
std::vector<TemperatureResult> run_temperature_series(
    const SimSetup& setup, const std::vector<TemperatureRow>& rows,
    const SweepSpec& sweep, std::uint64_t master_seed);

struct AmplitudeResult {
    double v_max_V = 0.0;
    CycleResult result;
};

std::vector<AmplitudeResult> run_amplitude(const SimSetup& setup,
                                           const std::vector<double>& v_maxes_V,
                                           double rate_V_per_s,
                                           std::uint64_t master_seed);

enum class InitialState { lrs, hrs };

struct RetentionResult {
    std::vector<TraceRecord> prep_trace;   // the programming half-sweep
    std::vector<TraceRecord> read_trace;   // one record per read
};

// Programs the device with a half-sweep, then alternates zero-bias
// retention evolution over each interval with a frozen-position read.
RetentionResult run_retention(const SimSetup& setup, InitialState initial,
                              int n_reads, double read_voltage_V,
                              double interval_s, const SweepSpec& prep,
                              std::uint64_t seed);

// Sub-run seed derivation (counter-based, order-independent).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace bfosim

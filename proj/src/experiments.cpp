#include "bfosim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfosim/errors.hpp"
#include "bfosim/rng.hpp"

namespace bfosim {

Device make_device(const SimSetup& setup, std::uint64_t seed) {
    return Device(setup.device, setup.transport, setup.n_nodes, setup.n_particles,
                  seed, setup.kernel);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return rng::CounterRng(master_seed)
        .uniform_u64(rng::Stream::device_seeds, index, 0);
}

namespace {

// Largest-slope sample on the rising positive branch of the first cycle.
struct SetBranch {
    std::vector<double> v;
    std::vector<double> i;
};

SetBranch rising_branch(const std::vector<TraceRecord>& trace) {
    SetBranch b;
    double v_prev = 0.0;
    for (const auto& r : trace) {
        if (r.v_device_V >= 0.0 && r.v_device_V >= v_prev) {
            b.v.push_back(r.v_device_V);
            b.i.push_back(r.i_device_A);
            v_prev = r.v_device_V;
        } else if (!b.v.empty()) {
            break;  // end of the first rising segment
        }
    }
    return b;
}

double current_at_voltage(const std::vector<TraceRecord>& trace, double v_read,
                          bool rising) {
    double best_dv = std::numeric_limits<double>::infinity();
    double best_i = 0.0;
    double v_prev = -std::numeric_limits<double>::infinity();
    for (const auto& r : trace) {
        const bool is_rising = r.v_device_V >= v_prev;
        v_prev = r.v_device_V;
        if (r.v_device_V < 0.0) continue;
        if (is_rising != rising) continue;
        const double dv = std::fabs(r.v_device_V - v_read);
        if (dv < best_dv) {
            best_dv = dv;
            best_i = r.i_device_A;
        }
    }
    return best_i;
}

}  // namespace

Metrics compute_metrics(const std::vector<TraceRecord>& trace,
                        double read_voltage_V) {
    Metrics m;
    if (trace.empty()) {
        m.no_switch = true;
        return m;
    }

    double area = 0.0;
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        area += 0.5 * (trace[k].i_device_A + trace[k + 1].i_device_A) *
                (trace[k + 1].v_device_V - trace[k].v_device_V);
    }
    m.loop_area_VA = std::fabs(area);

    const SetBranch branch = rising_branch(trace);
    if (branch.v.size() >= 3) {
        const std::size_t stencil = std::max<std::size_t>(1, branch.v.size() / 100);
        double best_slope = -std::numeric_limits<double>::infinity();
        for (std::size_t k = stencil; k + stencil < branch.v.size(); ++k) {
            const double dv = branch.v[k + stencil] - branch.v[k - stencil];
            if (dv <= 0.0) continue;
            const double slope = (branch.i[k + stencil] - branch.i[k - stencil]) / dv;
            if (slope > best_slope) {
                best_slope = slope;
                m.switching_voltage_V = branch.v[k];
            }
        }
    }

    const double i_forward = current_at_voltage(trace, read_voltage_V, true);
    const double i_return = current_at_voltage(trace, read_voltage_V, false);
    if (i_forward != 0.0) {
        m.hrs_lrs_ratio_at_read = i_return / i_forward;
    }
    m.no_switch = !(m.hrs_lrs_ratio_at_read > 1.05);

    m.q_final = trace.back().q;
    m.d_final_m = trace.back().d_mean_m;
    return m;
}

std::vector<TraceRecord> run_iv_sweep(Device& device,
                                      const std::vector<double>& samples) {
    std::vector<TraceRecord> trace;
    trace.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        try {
            trace.push_back(device.step(samples[k]));
        } catch (const SolverError& e) {
            throw SolverError("sweep sample " + std::to_string(k) + ": " + e.what(),
                              e.last_residual);
        }
    }
    return trace;
}

namespace {

CycleResult finish_cycle(Device& device, std::vector<TraceRecord> trace) {
    CycleResult out;
    out.trace = std::move(trace);
    out.metrics = compute_metrics(out.trace);
    out.metrics.q_final = device.state().q;
    out.metrics.d_final_m = device.state().mean_position_m;
    return out;
}

}  // namespace

std::vector<CycleResult> run_c2c(const SimSetup& setup, const SweepSpec& sweep,
                                 int n_cycles, std::uint64_t seed) {
    if (n_cycles < 1) throw ConfigError("c2c.n_cycles: must be >= 1");
    Device device = make_device(setup, seed);
    const auto cycle_samples =
        triangle_sweep(sweep.v_max_V, sweep.rate_V_per_s, 1, setup.transport.dt_s);

    std::vector<CycleResult> cycles;
    cycles.reserve(static_cast<std::size_t>(n_cycles));
    for (int c = 0; c < n_cycles; ++c) {
        cycles.push_back(finish_cycle(device, run_iv_sweep(device, cycle_samples)));
    }
    return cycles;
}

std::vector<DeviceRow> reference_device_rows() {
    return {
        {295.4e-9, 600.0e-9, 2.0e22},
        {306.89e-9, 588.2e-9, 2.6e22},
        {299.001e-9, 601.5e-9, 2.1e22},
        {302.23e-9, 586.9e-9, 1.5e22},
    };
}

void VariabilitySpec::validate() const {
    if (n_devices < 1) throw ConfigError("d2d.n_devices: must be >= 1");
    if (length_sd_m < 0.0 || density_sd_per_m3 < 0.0) {
        throw ConfigError("d2d: standard deviations must be >= 0");
    }
    if (!(truncation_sd > 0.0)) throw ConfigError("d2d.truncation_sd: must be > 0");
    if (length_mean_m - truncation_sd * length_sd_m <= 0.0) {
        throw ConfigError("d2d: length truncation window reaches zero");
    }
    if (density_mean_per_m3 - truncation_sd * density_sd_per_m3 <= 0.0) {
        throw ConfigError("d2d: density truncation window reaches zero");
    }
}

std::vector<DeviceRow> sample_device_rows(const VariabilitySpec& spec,
                                          std::uint64_t master_seed) {
    spec.validate();
    std::vector<DeviceRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.n_devices));
    for (int i = 0; i < spec.n_devices; ++i) {
        rng::SequencedRng gen(master_seed, rng::Stream::sampling,
                              static_cast<std::uint64_t>(i));
        auto draw = [&](double mean, double sd) {
            if (sd == 0.0) return mean;
            return gen.truncated_gaussian(mean, sd, mean - spec.truncation_sd * sd,
                                          mean + spec.truncation_sd * sd);
        };
        DeviceRow row;
        row.target_mean_m = 0.0;
        row.length_m = draw(spec.length_mean_m, spec.length_sd_m);
        row.density_per_m3 = draw(spec.density_mean_per_m3, spec.density_sd_per_m3);
        rows.push_back(row);
    }
    return rows;
}

std::vector<D2DResult> run_d2d(const SimSetup& setup,
                               const std::vector<DeviceRow>& rows,
                               const SweepSpec& sweep, std::uint64_t master_seed) {
    if (rows.size() < 1) throw ConfigError("d2d: need at least one device row");
    std::vector<D2DResult> results;
    results.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        SimSetup local = setup;
        local.device.length_m = rows[i].length_m;
        local.device.defect_density_per_m3 = rows[i].density_per_m3;
        local.device.target_mean_position_m = rows[i].target_mean_m;

        D2DResult out;
        out.row = rows[i];
        out.seed = derive_seed(master_seed, i);
        Device device = make_device(local, out.seed);
        const auto samples = triangle_sweep(sweep.v_max_V, sweep.rate_V_per_s,
                                            sweep.n_cycles, local.transport.dt_s);
        out.result = finish_cycle(device, run_iv_sweep(device, samples));
        results.push_back(std::move(out));
    }
    return results;
}

std::vector<TemperatureRow> reference_temperature_rows() {
    return {
        {298.0, 52.0, 8.0e-4, 0.0},   {313.0, 60.0, 9.0e-4, 0.005},
        {323.0, 72.0, 1.0e-3, 0.01},  {333.0, 100.0, 3.5e-3, 0.04},
        {343.0, 132.0, 5.0e-3, 0.06}, {348.0, 145.0, 7.0e-3, 0.062},
    };
}

std::vector<TemperatureResult> run_temperature_series(
    const SimSetup& setup, const std::vector<TemperatureRow>& rows,
    const SweepSpec& sweep, std::uint64_t master_seed) {
    if (rows.empty()) throw ConfigError("temperature: need at least one row");
    std::vector<TemperatureResult> results;
    results.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        TemperatureResult out;
        out.row = rows[i];
        for (const bool with_friction : {true, false}) {
            SimSetup local = setup;
            local.device.temperature_K = rows[i].temperature_K;
            local.device.rel_permittivity = rows[i].rel_permittivity;
            local.device.conductivity_S_per_m = rows[i].conductivity_S_per_m;
            local.device.lambda_T = with_friction ? rows[i].lambda_T : 0.0;

            Device device = make_device(local, derive_seed(master_seed, i));
            const auto samples = triangle_sweep(sweep.v_max_V, sweep.rate_V_per_s,
                                                sweep.n_cycles,
                                                local.transport.dt_s);
            auto cycle = finish_cycle(device, run_iv_sweep(device, samples));
            (with_friction ? out.with_friction : out.without_friction) =
                std::move(cycle);
        }
        results.push_back(std::move(out));
    }
    return results;
}

std::vector<AmplitudeResult> run_amplitude(const SimSetup& setup,
                                           const std::vector<double>& v_maxes_V,
                                           double rate_V_per_s,
                                           std::uint64_t master_seed) {
    if (v_maxes_V.empty()) throw ConfigError("amplitude: need at least one v_max");
    std::vector<AmplitudeResult> results;
    results.reserve(v_maxes_V.size());
    for (std::size_t i = 0; i < v_maxes_V.size(); ++i) {
        AmplitudeResult out;
        out.v_max_V = v_maxes_V[i];
        Device device = make_device(setup, derive_seed(master_seed, i));
        const auto samples =
            triangle_sweep(out.v_max_V, rate_V_per_s, 1, setup.transport.dt_s);
        out.result = finish_cycle(device, run_iv_sweep(device, samples));
        results.push_back(std::move(out));
    }
    return results;
}

RetentionResult run_retention(const SimSetup& setup, InitialState initial,
                              int n_reads, double read_voltage_V,
                              double interval_s, const SweepSpec& prep,
                              std::uint64_t seed) {
    if (n_reads < 1) throw ConfigError("retention.n_reads: must be >= 1");
    if (!(interval_s > 0.0)) throw ConfigError("retention.interval_s: must be > 0");

    Device device = make_device(setup, seed);
    const auto prep_samples =
        initial == InitialState::lrs
            ? set_half_sweep(prep.v_max_V, prep.rate_V_per_s, setup.transport.dt_s)
            : reset_half_sweep(prep.v_max_V, prep.rate_V_per_s,
                               setup.transport.dt_s);

    RetentionResult out;
    out.prep_trace = run_iv_sweep(device, prep_samples);
    out.read_trace.reserve(static_cast<std::size_t>(n_reads));
    for (int read = 0; read < n_reads; ++read) {
        device.retention_evolve(interval_s);
        out.read_trace.push_back(device.read(read_voltage_V));
    }
    return out;
}

}  // namespace bfosim

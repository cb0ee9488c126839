#include "bfosim/runner.hpp"

#include <random>
#include <sstream>

#include "bfosim/errors.hpp"
#include "bfosim/trace_io.hpp"

namespace bfosim {

namespace {

using nlohmann::json;

json metrics_json(const Metrics& m) {
    return json{{"switching_voltage_V", m.switching_voltage_V},
                {"hrs_lrs_ratio_at_read", m.hrs_lrs_ratio_at_read},
                {"loop_area_VA", m.loop_area_VA},
                {"q_final", m.q_final},
                {"d_final_m", m.d_final_m},
                {"no_switch", m.no_switch}};
}

SimSetup setup_from_config(const RunConfig& cfg) {
    SimSetup setup;
    setup.device = cfg.device;
    setup.transport = cfg.transport;
    setup.n_nodes = cfg.grid.n_nodes;
    setup.n_particles = cfg.simulation.n_particles;
    setup.kernel = kernels::parse_kind(cfg.simulation.kernel);
    return setup;
}

std::vector<double> drive_samples(const RunConfig& cfg) {
    Waveform w;
    w.kind = cfg.experiment.waveform == "staircase" ? WaveformKind::staircase
                                                    : WaveformKind::triangle;
    w.v_max_V = cfg.experiment.v_max_V;
    w.rate_V_per_s = cfg.experiment.rate_V_per_s;
    w.dwell_s = cfg.experiment.dwell_s;
    w.n_cycles = cfg.experiment.n_cycles;
    return samples(w, cfg.transport.dt_s);
}

std::string label_for_temperature(double t_kelvin, bool with_friction) {
    std::ostringstream name;
    name << "T" << static_cast<int>(t_kelvin);
    if (!with_friction) name << "_nofriction";
    return name.str();
}

struct Emitter {
    std::filesystem::path root;
    const RunConfig& cfg;
    std::vector<std::filesystem::path> artifacts;

    void trace(const std::filesystem::path& rel, std::vector<TraceRecord> t) {
        const auto path = root / rel;
        std::filesystem::create_directories(path.parent_path());
        write_trace_csv(path, apply_row_cap(std::move(t), cfg.simulation.max_rows,
                                            cfg.simulation.downsample));
        artifacts.push_back(path);
    }
};

}  // namespace

const char* version_string() { return "bfosim 0.1.0"; }

std::uint64_t resolve_seed(const RunConfig& config) {
    if (config.seed) return *config.seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

RunOutcome run_experiment(const RunConfig& config) {
    config.validate();
    const std::uint64_t seed = resolve_seed(config);
    const SimSetup setup = setup_from_config(config);
    const auto& e = config.experiment;

    const std::filesystem::path out_dir(config.output_dir);
    std::filesystem::create_directories(out_dir);
    Emitter emit{out_dir, config, {}};

    json summary;
    summary["version"] = version_string();
    summary["experiment"] = e.type;
    summary["seed"] = seed;
    summary["kernel"] = kernels::select(setup.kernel).name;

    if (e.type == "sweep") {
        Device device = make_device(setup, seed);
        auto trace = run_iv_sweep(device, drive_samples(config));
        Metrics m = compute_metrics(trace, e.read_voltage_V);
        m.q_final = device.state().q;
        m.d_final_m = device.state().mean_position_m;
        emit.trace("trace.csv", std::move(trace));
        summary["metrics"] = metrics_json(m);
    } else if (e.type == "c2c") {
        auto cycles = run_c2c(setup, {e.v_max_V, e.rate_V_per_s, 1}, e.n_cycles, seed);
        json per_cycle = json::array();
        for (std::size_t c = 0; c < cycles.size(); ++c) {
            std::ostringstream dir;
            dir << "cycle_" << (c < 10 ? "0" : "") << c;
            emit.trace(std::filesystem::path(dir.str()) / "trace.csv",
                       std::move(cycles[c].trace));
            per_cycle.push_back(metrics_json(cycles[c].metrics));
        }
        summary["metrics"] = json{{"cycles", per_cycle}};
    } else if (e.type == "d2d") {
        std::vector<DeviceRow> rows;
        if (e.devices) {
            rows = *e.devices;
        } else if (e.sampling) {
            rows = sample_device_rows(*e.sampling, seed);
        } else {
            rows = reference_device_rows();
        }
        auto results = run_d2d(setup, rows, {e.v_max_V, e.rate_V_per_s, e.n_cycles}, seed);
        json per_device = json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            std::ostringstream dir;
            dir << "device_" << (i < 10 ? "0" : "") << i;
            emit.trace(std::filesystem::path(dir.str()) / "trace.csv",
                       std::move(results[i].result.trace));
            json entry = metrics_json(results[i].result.metrics);
            entry["seed"] = results[i].seed;
            entry["length_m"] = results[i].row.length_m;
            entry["density_per_m3"] = results[i].row.density_per_m3;
            entry["target_mean_m"] = results[i].row.target_mean_m;
            per_device.push_back(std::move(entry));
        }
        summary["metrics"] = json{{"devices", per_device}};
    } else if (e.type == "temperature") {
        auto results =
            run_temperature_series(setup, e.rows, {e.v_max_V, e.rate_V_per_s, 1}, seed);
        json per_row = json::array();
        for (auto& res : results) {
            const std::string base = label_for_temperature(res.row.temperature_K, true);
            const std::string nofr = label_for_temperature(res.row.temperature_K, false);
            emit.trace(std::filesystem::path(base) / "trace.csv",
                       std::move(res.with_friction.trace));
            emit.trace(std::filesystem::path(nofr) / "trace.csv",
                       std::move(res.without_friction.trace));
            per_row.push_back(
                json{{"temperature_K", res.row.temperature_K},
                     {"lambda_T", res.row.lambda_T},
                     {"with_friction", metrics_json(res.with_friction.metrics)},
                     {"without_friction", metrics_json(res.without_friction.metrics)}});
        }
        summary["metrics"] = json{{"rows", per_row}};
    } else if (e.type == "amplitude") {
        auto results = run_amplitude(setup, e.v_maxes_V, e.rate_V_per_s, seed);
        json per_amp = json::array();
        for (auto& res : results) {
            emit.trace(std::filesystem::path("vmax_" + format_double(res.v_max_V)) /
                           "trace.csv",
                       std::move(res.result.trace));
            json entry = metrics_json(res.result.metrics);
            entry["v_max_V"] = res.v_max_V;
            per_amp.push_back(std::move(entry));
        }
        summary["metrics"] = json{{"amplitudes", per_amp}};
    } else if (e.type == "retention") {
        const InitialState initial =
            e.initial_state == "LRS" ? InitialState::lrs : InitialState::hrs;
        auto res = run_retention(setup, initial, e.n_reads, e.read_voltage_V,
                                 e.interval_s, {e.v_max_V, e.rate_V_per_s, 1}, seed);
        json m;
        m["initial_state"] = e.initial_state;
        m["first_read_A"] = res.read_trace.front().i_device_A;
        m["last_read_A"] = res.read_trace.back().i_device_A;
        m["d_start_m"] = res.read_trace.front().d_mean_m;
        m["d_end_m"] = res.read_trace.back().d_mean_m;
        emit.trace("prep/trace.csv", std::move(res.prep_trace));
        emit.trace("reads/trace.csv", std::move(res.read_trace));
        summary["metrics"] = std::move(m);
    }

    // Echo the effective config with the resolved seed: enough to replay.
    RunConfig echo = config;
    echo.seed = seed;
    summary["config"] = to_json(echo);

    json files = json::array();
    for (const auto& p : emit.artifacts) {
        files.push_back(std::filesystem::relative(p, out_dir).string());
    }
    summary["artifacts"] = std::move(files);

    const auto summary_path = out_dir / "summary.json";
    write_json(summary_path, summary);

    RunOutcome outcome;
    outcome.summary = std::move(summary);
    outcome.artifacts = std::move(emit.artifacts);
    outcome.artifacts.push_back(summary_path);
    return outcome;
}

}  // namespace bfosim

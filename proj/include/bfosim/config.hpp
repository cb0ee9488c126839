#pragma once

// Run configuration: JSON ingestion with strict unknown-key rejection,
// dotted-path overrides, and a round-trippable effective-config echo.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bfosim/experiments.hpp"

#include "json.hpp"

namespace bfosim {

struct GridConfig {
    int n_nodes = 601;  // 1 nm spacing on the reference 600 nm device
};

struct SimulationConfig {
    std::size_t n_particles = 5000;
    std::string kernel = "auto";
    std::uint64_t max_rows = 2000000;  // trace row cap
    bool downsample = false;           // stride-decimate instead of failing
};

struct ExperimentConfig {
    std::string type = "sweep";

    // sweep / c2c / prep and shared drive settings
    std::string waveform = "triangle";  // triangle | staircase
    double v_max_V = 8.5;
    double rate_V_per_s = 3.6;
    double dwell_s = 0.1;
    int n_cycles = 1;

    // d2d: explicit rows win over sampling when both are present
    std::optional<std::vector<DeviceRow>> devices;
    std::optional<VariabilitySpec> sampling;

    // temperature
    std::vector<TemperatureRow> rows = reference_temperature_rows();

    // amplitude
    std::vector<double> v_maxes_V = {3.0, 5.0, 7.0, 8.5};

    // retention
    std::string initial_state = "LRS";
    int n_reads = 3000;
    double read_voltage_V = 2.0;
    double interval_s = 10.0;
};

struct RunConfig {
    DeviceParameters device;
    TransportConfig transport;
    GridConfig grid;
    SimulationConfig simulation;
    ExperimentConfig experiment;
    std::optional<std::uint64_t> seed;
    std::string output_dir = "out";

    void validate() const;  // throws ConfigError naming field and bound
};

// Parses and validates a config file. Parse errors carry position info;
// unknown keys anywhere in the tree are rejected.
RunConfig load_config(const std::filesystem::path& path);

RunConfig config_from_json(const nlohmann::json& j);

// Full effective configuration (defaults materialised); reloading the
// result yields an identical RunConfig.
nlohmann::json to_json(const RunConfig& config);

// Applies "dotted.path=value" onto a config JSON tree; the value is parsed
// as JSON when possible and treated as a string otherwise.
void apply_override(nlohmann::json& tree, const std::string& assignment);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace bfosim

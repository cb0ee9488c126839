#include "bfosim/config.hpp"

#include <fstream>
#include <set>

#include "bfosim/errors.hpp"

namespace bfosim {

namespace {

using nlohmann::json;

// Reads one JSON object, tracking consumed keys; leftovers are an error.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!obj_.contains(key)) return fallback;
        try {
            return obj_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return obj_.contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (seen_.count(it.key()) == 0) {
                throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
            }
        }
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

const json kEmptyObject = json::object();

const json& section(const json& root, const char* name) {
    return root.contains(name) ? root.at(name) : kEmptyObject;
}

DeviceParameters device_from_json(const json& j) {
    DeviceParameters d;
    ObjectReader r(j, "device");
    d.temperature_K = r.get("temperature_K", d.temperature_K);
    d.phonon_freq_Hz = r.get("phonon_freq_Hz", d.phonon_freq_Hz);
    d.lattice_const_m = r.get("lattice_const_m", d.lattice_const_m);
    d.area_m2 = r.get("area_m2", d.area_m2);
    d.rel_permittivity = r.get("rel_permittivity", d.rel_permittivity);
    d.conductivity_S_per_m = r.get("conductivity_S_per_m", d.conductivity_S_per_m);
    d.length_m = r.get("length_m", d.length_m);
    d.defect_density_per_m3 = r.get("defect_density_per_m3", d.defect_density_per_m3);
    d.phi0_top_eV = r.get("phi0_top_eV", d.phi0_top_eV);
    d.n0_top = r.get("n0_top", d.n0_top);
    d.phi0_bot_eV = r.get("phi0_bot_eV", d.phi0_bot_eV);
    d.n0_bot = r.get("n0_bot", d.n0_bot);
    d.lambda_U = r.get("lambda_U", d.lambda_U);
    d.lambda_b_top = r.get("lambda_b_top", d.lambda_b_top);
    d.lambda_b_bot = r.get("lambda_b_bot", d.lambda_b_bot);
    d.lambda_n_top = r.get("lambda_n_top", d.lambda_n_top);
    d.lambda_n_bot = r.get("lambda_n_bot", d.lambda_n_bot);
    d.lambda_T = r.get("lambda_T", d.lambda_T);
    d.delta_max = r.get("delta_max", d.delta_max);
    d.charge_number = r.get("charge_number", d.charge_number);
    d.richardson_A_per_m2K2 = r.get("richardson_A_per_m2K2", d.richardson_A_per_m2K2);
    d.alpha_r_eV_per_sqrtV = r.get("alpha_r_eV_per_sqrtV", d.alpha_r_eV_per_sqrtV);
    d.target_mean_position_m =
        r.get("target_mean_position_m", d.target_mean_position_m);
    r.finish();
    return d;
}

json device_to_json(const DeviceParameters& d) {
    return json{{"temperature_K", d.temperature_K},
                {"phonon_freq_Hz", d.phonon_freq_Hz},
                {"lattice_const_m", d.lattice_const_m},
                {"area_m2", d.area_m2},
                {"rel_permittivity", d.rel_permittivity},
                {"conductivity_S_per_m", d.conductivity_S_per_m},
                {"length_m", d.length_m},
                {"defect_density_per_m3", d.defect_density_per_m3},
                {"phi0_top_eV", d.phi0_top_eV},
                {"n0_top", d.n0_top},
                {"phi0_bot_eV", d.phi0_bot_eV},
                {"n0_bot", d.n0_bot},
                {"lambda_U", d.lambda_U},
                {"lambda_b_top", d.lambda_b_top},
                {"lambda_b_bot", d.lambda_b_bot},
                {"lambda_n_top", d.lambda_n_top},
                {"lambda_n_bot", d.lambda_n_bot},
                {"lambda_T", d.lambda_T},
                {"delta_max", d.delta_max},
                {"charge_number", d.charge_number},
                {"richardson_A_per_m2K2", d.richardson_A_per_m2K2},
                {"alpha_r_eV_per_sqrtV", d.alpha_r_eV_per_sqrtV},
                {"target_mean_position_m", d.target_mean_position_m}};
}

DeviceRow device_row_from_json(const json& j, const std::string& path) {
    DeviceRow row;
    ObjectReader r(j, path);
    row.target_mean_m = r.get("target_mean_m", row.target_mean_m);
    row.length_m = r.get("length_m", row.length_m);
    row.density_per_m3 = r.get("density_per_m3", row.density_per_m3);
    r.finish();
    return row;
}

json device_row_to_json(const DeviceRow& row) {
    return json{{"target_mean_m", row.target_mean_m},
                {"length_m", row.length_m},
                {"density_per_m3", row.density_per_m3}};
}

TemperatureRow temperature_row_from_json(const json& j, const std::string& path) {
    TemperatureRow row;
    ObjectReader r(j, path);
    row.temperature_K = r.get("temperature_K", row.temperature_K);
    row.rel_permittivity = r.get("rel_permittivity", row.rel_permittivity);
    row.conductivity_S_per_m = r.get("conductivity_S_per_m", row.conductivity_S_per_m);
    row.lambda_T = r.get("lambda_T", row.lambda_T);
    r.finish();
    return row;
}

json temperature_row_to_json(const TemperatureRow& row) {
    return json{{"temperature_K", row.temperature_K},
                {"rel_permittivity", row.rel_permittivity},
                {"conductivity_S_per_m", row.conductivity_S_per_m},
                {"lambda_T", row.lambda_T}};
}

VariabilitySpec sampling_from_json(const json& j) {
    VariabilitySpec s;
    ObjectReader r(j, "experiment.sampling");
    s.n_devices = r.get("n_devices", s.n_devices);
    s.length_mean_m = r.get("length_mean_m", s.length_mean_m);
    s.length_sd_m = r.get("length_sd_m", s.length_sd_m);
    s.density_mean_per_m3 = r.get("density_mean_per_m3", s.density_mean_per_m3);
    s.density_sd_per_m3 = r.get("density_sd_per_m3", s.density_sd_per_m3);
    s.truncation_sd = r.get("truncation_sd", s.truncation_sd);
    r.finish();
    return s;
}

json sampling_to_json(const VariabilitySpec& s) {
    return json{{"n_devices", s.n_devices},
                {"length_mean_m", s.length_mean_m},
                {"length_sd_m", s.length_sd_m},
                {"density_mean_per_m3", s.density_mean_per_m3},
                {"density_sd_per_m3", s.density_sd_per_m3},
                {"truncation_sd", s.truncation_sd}};
}

}  // namespace

RunConfig config_from_json(const json& root) {
    if (!root.is_object()) throw ConfigError("config root: expected an object");
    {
        ObjectReader top(root, "config");
        top.has("device");
        top.has("transport");
        top.has("grid");
        top.has("simulation");
        top.has("experiment");
        top.has("seed");
        top.has("output_dir");
        top.finish();
    }

    RunConfig cfg;
    cfg.device = device_from_json(section(root, "device"));

    {
        ObjectReader r(section(root, "transport"), "transport");
        cfg.transport.dt_s = r.get("dt_s", cfg.transport.dt_s);
        cfg.transport.retention_move_prob =
            r.get("retention_move_prob", cfg.transport.retention_move_prob);
        cfg.transport.exp_arg_bound = r.get("exp_arg_bound", cfg.transport.exp_arg_bound);
        cfg.transport.max_substeps = r.get("max_substeps", cfg.transport.max_substeps);
        r.finish();
    }
    {
        ObjectReader r(section(root, "grid"), "grid");
        cfg.grid.n_nodes = r.get("n_nodes", cfg.grid.n_nodes);
        r.finish();
    }
    {
        ObjectReader r(section(root, "simulation"), "simulation");
        cfg.simulation.n_particles = r.get("n_particles", cfg.simulation.n_particles);
        cfg.simulation.kernel = r.get("kernel", cfg.simulation.kernel);
        cfg.simulation.max_rows = r.get("max_rows", cfg.simulation.max_rows);
        cfg.simulation.downsample = r.get("downsample", cfg.simulation.downsample);
        r.finish();
    }
    {
        const json& je = section(root, "experiment");
        ObjectReader r(je, "experiment");
        auto& e = cfg.experiment;
        e.type = r.get("type", e.type);
        e.waveform = r.get("waveform", e.waveform);
        e.v_max_V = r.get("v_max_V", e.v_max_V);
        e.rate_V_per_s = r.get("rate_V_per_s", e.rate_V_per_s);
        e.dwell_s = r.get("dwell_s", e.dwell_s);
        e.n_cycles = r.get("n_cycles", e.n_cycles);
        if (r.has("devices")) {
            const json& arr = r.raw("devices");
            if (!arr.is_array()) throw ConfigError("experiment.devices: expected an array");
            std::vector<DeviceRow> rows;
            for (std::size_t i = 0; i < arr.size(); ++i) {
                rows.push_back(device_row_from_json(
                    arr[i], "experiment.devices[" + std::to_string(i) + "]"));
            }
            e.devices = std::move(rows);
        }
        if (r.has("sampling")) {
            e.sampling = sampling_from_json(r.raw("sampling"));
        }
        if (r.has("rows")) {
            const json& arr = r.raw("rows");
            if (!arr.is_array()) throw ConfigError("experiment.rows: expected an array");
            e.rows.clear();
            for (std::size_t i = 0; i < arr.size(); ++i) {
                e.rows.push_back(temperature_row_from_json(
                    arr[i], "experiment.rows[" + std::to_string(i) + "]"));
            }
        }
        e.v_maxes_V = r.get("v_maxes_V", e.v_maxes_V);
        e.initial_state = r.get("initial_state", e.initial_state);
        e.n_reads = r.get("n_reads", e.n_reads);
        e.read_voltage_V = r.get("read_voltage_V", e.read_voltage_V);
        e.interval_s = r.get("interval_s", e.interval_s);
        r.finish();
    }
    if (root.contains("seed")) {
        try {
            cfg.seed = root.at("seed").get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("seed: ") + e.what());
        }
    }
    if (root.contains("output_dir")) {
        try {
            cfg.output_dir = root.at("output_dir").get<std::string>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("output_dir: ") + e.what());
        }
    }

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    device.validate();
    transport.validate();
    if (grid.n_nodes < 3) throw ConfigError("grid.n_nodes: must be >= 3");
    if (simulation.n_particles < 2) {
        throw ConfigError("simulation.n_particles: must be >= 2");
    }
    if (simulation.max_rows < 1) throw ConfigError("simulation.max_rows: must be >= 1");
    kernels::parse_kind(simulation.kernel);

    const auto& e = experiment;
    static const std::set<std::string> kTypes = {"sweep",       "c2c",    "d2d",
                                                 "temperature", "amplitude",
                                                 "retention"};
    if (kTypes.count(e.type) == 0) {
        throw ConfigError("experiment.type: unknown type '" + e.type + "'");
    }
    if (e.waveform != "triangle" && e.waveform != "staircase") {
        throw ConfigError("experiment.waveform: must be triangle or staircase");
    }
    if (e.v_max_V < 0.0) throw ConfigError("experiment.v_max_V: must be >= 0");
    if (!(e.rate_V_per_s > 0.0)) {
        throw ConfigError("experiment.rate_V_per_s: must be > 0");
    }
    if (!(e.dwell_s > 0.0)) throw ConfigError("experiment.dwell_s: must be > 0");
    if (e.n_cycles < 1) throw ConfigError("experiment.n_cycles: must be >= 1");
    if (e.sampling) e.sampling->validate();
    if (e.devices && e.devices->empty()) {
        throw ConfigError("experiment.devices: must not be empty");
    }
    if (e.type == "temperature" && e.rows.empty()) {
        throw ConfigError("experiment.rows: must not be empty");
    }
    if (e.type == "amplitude" && e.v_maxes_V.empty()) {
        throw ConfigError("experiment.v_maxes_V: must not be empty");
    }
    if (e.initial_state != "LRS" && e.initial_state != "HRS") {
        throw ConfigError("experiment.initial_state: must be LRS or HRS");
    }
    if (e.n_reads < 1) throw ConfigError("experiment.n_reads: must be >= 1");
    if (!(e.interval_s > 0.0)) throw ConfigError("experiment.interval_s: must be > 0");
}

json to_json(const RunConfig& cfg) {
    json j;
    j["device"] = device_to_json(cfg.device);
    j["transport"] = json{{"dt_s", cfg.transport.dt_s},
                          {"retention_move_prob", cfg.transport.retention_move_prob},
                          {"exp_arg_bound", cfg.transport.exp_arg_bound},
                          {"max_substeps", cfg.transport.max_substeps}};
    j["grid"] = json{{"n_nodes", cfg.grid.n_nodes}};
    j["simulation"] = json{{"n_particles", cfg.simulation.n_particles},
                           {"kernel", cfg.simulation.kernel},
                           {"max_rows", cfg.simulation.max_rows},
                           {"downsample", cfg.simulation.downsample}};
    json e;
    e["type"] = cfg.experiment.type;
    e["waveform"] = cfg.experiment.waveform;
    e["v_max_V"] = cfg.experiment.v_max_V;
    e["rate_V_per_s"] = cfg.experiment.rate_V_per_s;
    e["dwell_s"] = cfg.experiment.dwell_s;
    e["n_cycles"] = cfg.experiment.n_cycles;
    if (cfg.experiment.devices) {
        json arr = json::array();
        for (const auto& row : *cfg.experiment.devices) {
            arr.push_back(device_row_to_json(row));
        }
        e["devices"] = std::move(arr);
    }
    if (cfg.experiment.sampling) {
        e["sampling"] = sampling_to_json(*cfg.experiment.sampling);
    }
    json rows = json::array();
    for (const auto& row : cfg.experiment.rows) {
        rows.push_back(temperature_row_to_json(row));
    }
    e["rows"] = std::move(rows);
    e["v_maxes_V"] = cfg.experiment.v_maxes_V;
    e["initial_state"] = cfg.experiment.initial_state;
    e["n_reads"] = cfg.experiment.n_reads;
    e["read_voltage_V"] = cfg.experiment.read_voltage_V;
    e["interval_s"] = cfg.experiment.interval_s;
    j["experiment"] = std::move(e);
    if (cfg.seed) j["seed"] = *cfg.seed;
    j["output_dir"] = cfg.output_dir;
    return j;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return config_from_json(root);
}

void apply_override(json& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override: expected key.path=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;  // bare strings stay strings
    }

    json* node = &tree;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) {
            throw ConfigError("override: empty key segment in '" + path + "'");
        }
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return to_json(a) == to_json(b);
}

}  // namespace bfosim

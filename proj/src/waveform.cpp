#include "bfosim/waveform.hpp"

#include <cmath>

#include "bfosim/errors.hpp"

namespace bfosim {

namespace {

void check_common(double v_max, double rate, double dt, int n_cycles) {
    if (v_max < 0.0) throw ConfigError("waveform.v_max_V: must be >= 0");
    if (!(rate > 0.0)) throw ConfigError("waveform.rate_V_per_s: must be > 0");
    if (!(dt > 0.0)) throw ConfigError("waveform: dt must be > 0");
    if (n_cycles < 1) throw ConfigError("waveform.n_cycles: must be >= 1");
}

double triangle_value(double t, double v_max, double rate) {
    const double quarter = v_max / rate;
    if (t < quarter) return rate * t;
    if (t < 3.0 * quarter) return v_max - rate * (t - quarter);
    return -v_max + rate * (t - 3.0 * quarter);
}

}  // namespace

std::vector<double> triangle_sweep(double v_max_V, double rate_V_per_s,
                                   int n_cycles, double dt_s) {
    check_common(v_max_V, rate_V_per_s, dt_s, n_cycles);
    if (v_max_V == 0.0) return {};

    const double period = 4.0 * v_max_V / rate_V_per_s;
    const auto per_cycle = static_cast<std::size_t>(std::llround(period / dt_s));
    std::vector<double> out;
    out.reserve(per_cycle * static_cast<std::size_t>(n_cycles));
    for (int cycle = 0; cycle < n_cycles; ++cycle) {
        for (std::size_t k = 0; k < per_cycle; ++k) {
            out.push_back(
                triangle_value(static_cast<double>(k) * dt_s, v_max_V, rate_V_per_s));
        }
    }
    return out;
}

std::vector<double> staircase_sweep(double v_max_V, double rate_V_per_s,
                                    double dwell_s, int n_cycles, double dt_s) {
    check_common(v_max_V, rate_V_per_s, dt_s, n_cycles);
    if (!(dwell_s > 0.0)) throw ConfigError("waveform.dwell_s: must be > 0");
    if (v_max_V == 0.0) return {};

    const double step_V = rate_V_per_s * dwell_s;
    const double period = 4.0 * v_max_V / rate_V_per_s;
    const auto per_cycle = static_cast<std::size_t>(std::llround(period / dt_s));
    std::vector<double> out;
    out.reserve(per_cycle * static_cast<std::size_t>(n_cycles));
    for (int cycle = 0; cycle < n_cycles; ++cycle) {
        for (std::size_t k = 0; k < per_cycle; ++k) {
            const double v =
                triangle_value(static_cast<double>(k) * dt_s, v_max_V, rate_V_per_s);
            out.push_back(std::round(v / step_V) * step_V);
        }
    }
    return out;
}

std::vector<double> constant_level(double v_V, double duration_s, double dt_s) {
    if (!(dt_s > 0.0)) throw ConfigError("waveform: dt must be > 0");
    if (duration_s < 0.0) throw ConfigError("waveform: duration must be >= 0");
    const auto n = static_cast<std::size_t>(std::llround(duration_s / dt_s));
    return std::vector<double>(n, v_V);
}

std::vector<double> set_half_sweep(double v_max_V, double rate_V_per_s, double dt_s) {
    auto full = triangle_sweep(v_max_V, rate_V_per_s, 1, dt_s);
    full.resize(full.size() / 2);
    return full;
}

std::vector<double> reset_half_sweep(double v_max_V, double rate_V_per_s,
                                     double dt_s) {
    auto full = triangle_sweep(v_max_V, rate_V_per_s, 1, dt_s);
    return {full.begin() + static_cast<std::ptrdiff_t>(full.size() / 2), full.end()};
}

std::vector<double> samples(const Waveform& w, double dt_s) {
    switch (w.kind) {
        case WaveformKind::triangle:
            return triangle_sweep(w.v_max_V, w.rate_V_per_s, w.n_cycles, dt_s);
        case WaveformKind::staircase:
            return staircase_sweep(w.v_max_V, w.rate_V_per_s, w.dwell_s, w.n_cycles,
                                   dt_s);
        case WaveformKind::constant:
            return constant_level(w.v_max_V, w.dwell_s, dt_s);
    }
    throw ConfigError("waveform.kind: unknown kind");
}

}  // namespace bfosim

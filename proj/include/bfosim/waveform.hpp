#pragma once

// Drive waveforms sampled on the simulation timestep.

#include <vector>

namespace bfosim {

enum class WaveformKind { triangle, staircase, constant };

struct Waveform {
    WaveformKind kind = WaveformKind::triangle;
    double v_max_V = 8.5;
    double rate_V_per_s = 3.6;
    double dwell_s = 0.1;  // staircase tread / constant hold duration
    int n_cycles = 1;
};

// One triangle cycle visits 0 -> +v_max -> 0 -> -v_max -> 0.
// Returns n_cycles * round(period / dt) samples; v_max = 0 gives an empty
// (all-zero) waveform.
std::vector<double> triangle_sweep(double v_max_V, double rate_V_per_s,
                                   int n_cycles, double dt_s);

// Triangle quantised to treads of dwell_s (step height rate * dwell).
std::vector<double> staircase_sweep(double v_max_V, double rate_V_per_s,
                                    double dwell_s, int n_cycles, double dt_s);

// Constant level held for duration_s.
std::vector<double> constant_level(double v_V, double duration_s, double dt_s);

// First half of a triangle cycle: 0 -> +v_max -> 0 (drives toward LRS).
std::vector<double> set_half_sweep(double v_max_V, double rate_V_per_s, double dt_s);

// Second half: 0 -> -v_max -> 0 (drives toward HRS).
std::vector<double> reset_half_sweep(double v_max_V, double rate_V_per_s, double dt_s);

std::vector<double> samples(const Waveform& waveform, double dt_s);

}  // namespace bfosim

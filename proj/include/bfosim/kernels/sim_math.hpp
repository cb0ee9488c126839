#pragma once

// Scalar reference math for the particle kernels.
//
// The SIMD kernels mirror these functions operation-for-operation (same
// FMA placement, same rounding steps), which makes scalar and vector
// execution bit-identical per lane. Keep any change here in sync with
// kernels/avx2.cpp and kernels/neon.cpp.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace bfosim::kernels {

// exp(x) via round-to-nearest base-2 argument reduction and a degree-13
// Taylor polynomial in Horner/FMA form. Accurate to a few ulp, and -- the
// property we actually need -- reproducible across scalar/AVX2/NEON.
inline double sim_exp(double x) {
    constexpr double kLog2e  = 1.4426950408889634074;
    constexpr double kLn2Hi  = 6.93147180369123816490e-01;
    constexpr double kLn2Lo  = 1.90821492927058770002e-10;
    constexpr double kHiBound = 709.0;   // beyond: overflow -> inf
    constexpr double kLoBound = -708.0;  // beyond: underflow -> 0

    if (std::isnan(x)) return x;
    if (x > kHiBound) return std::numeric_limits<double>::infinity();
    if (x < kLoBound) return 0.0;

    const int n = static_cast<int>(std::lrint(x * kLog2e));
    const double nd = static_cast<double>(n);
    double r = std::fma(nd, -kLn2Hi, x);
    r = std::fma(nd, -kLn2Lo, r);

    // 1/k! for k = 13 .. 0
    double p = 1.6059043836821614599e-10;
    p = std::fma(p, r, 2.0876756987868098979e-09);
    p = std::fma(p, r, 2.5052108385441718775e-08);
    p = std::fma(p, r, 2.7557319223985890653e-07);
    p = std::fma(p, r, 2.7557319223985888276e-06);
    p = std::fma(p, r, 2.4801587301587301566e-05);
    p = std::fma(p, r, 1.9841269841269841253e-04);
    p = std::fma(p, r, 1.3888888888888889419e-03);
    p = std::fma(p, r, 8.3333333333333332177e-03);
    p = std::fma(p, r, 4.1666666666666664354e-02);
    p = std::fma(p, r, 1.6666666666666665741e-01);
    p = std::fma(p, r, 5.0e-01);
    p = std::fma(p, r, 1.0);
    p = std::fma(p, r, 1.0);

    const double scale =
        std::bit_cast<double>(static_cast<std::uint64_t>(n + 1023) << 52);
    return p * scale;
}

// Per-step transport coefficients, frozen before the particle loop.
struct TransportCoeffs {
    double dt_s = 0.0;              // step duration [s]
    double prefactor_m_per_s = 0.0; // nu0 * d * (1 - lambda_T) [m/s]
    double inv_kT_eV = 0.0;         // 1 / (k_B T) [1/eV]
    double field_coeff = 0.0;       // |z| d / (2 k_B T / e) [m/V]
    double ua_flat_eV = 0.0;        // activation floor [eV]
    double ua_rise_eV = 0.0;        // ramp height [eV]
    double ramp_start_m = 0.0;      // ramp onset [m]
    double inv_ramp_len = 0.0;      // 1 / ramp length [1/m]
    double bias_coeff_eV = 0.0;     // lambda_U * V_device [eV]
    double inv_length = 0.0;        // 1 / device length [1/m]
    double length_m = 0.0;          // device length [m]
    double delta_max = 0.0;         // max random displacement fraction
    double exp_arg_bound = 700.0;   // clamp for exponential arguments
    double inv_dx = 0.0;            // 1 / grid spacing [1/m]
    double dx_m = 0.0;              // grid spacing [m]
};

// Graded activation energy: flat floor, then a linear ramp to the peak.
inline double ref_activation_profile(double x, const TransportCoeffs& c) {
    double t = (x - c.ramp_start_m) * c.inv_ramp_len;
    t = t < 0.0 ? 0.0 : t;
    return std::fma(t, c.ua_rise_eV, c.ua_flat_eV);
}

// Profile plus the bias-dependent tilt lambda_U * V * (1 - x / l).
inline double ref_activation_eff(double x, const TransportCoeffs& c) {
    const double ua = ref_activation_profile(x, c);
    const double shape = 1.0 - x * c.inv_length;
    return std::fma(c.bias_coeff_eV, shape, ua);
}

// Linear interpolation of the nodal field at position x. Mirrors the
// deposition weights, so a particle never exerts force on itself.
inline double ref_gather(const double* node_field, int n_nodes, double inv_dx,
                         double x) {
    int k = static_cast<int>(x * inv_dx);
    const int k_max = n_nodes - 2;
    k = k > k_max ? k_max : k;
    k = k < 0 ? 0 : k;
    const double f = x * inv_dx - static_cast<double>(k);
    const double e0 = node_field[k];
    const double e1 = node_field[k + 1];
    return std::fma(f, e1 - e0, e0);
}

// Arrhenius hop drift, Eq.-of-motion form: v = A exp(-Ua/kT) * 2 sinh(a E).
// Returns the deterministic displacement v * dt. Out-of-range exponential
// arguments are clamped; *clamp_count reports how many.
inline double ref_drift_displacement(double field_V_per_m, double ua_eff_eV,
                                     const TransportCoeffs& c,
                                     std::uint64_t* clamp_count) {
    double arg_act = -ua_eff_eV * c.inv_kT_eV;
    double arg_field = c.field_coeff * field_V_per_m;
    const double bound = c.exp_arg_bound;
    if (arg_act > bound || arg_act < -bound) {
        arg_act = arg_act > bound ? bound : -bound;
        ++*clamp_count;
    }
    if (arg_field > bound || arg_field < -bound) {
        arg_field = arg_field > bound ? bound : -bound;
        ++*clamp_count;
    }
    const double mobility = c.prefactor_m_per_s * sim_exp(arg_act);
    const double bracket = sim_exp(arg_field) - sim_exp(-arg_field);
    return mobility * bracket * c.dt_s;
}

// Stochastic perturbation and wall clamp:
// x' = clamp(x + dx + (r - 0.5) * delta * |dx|).
inline double ref_jitter_clamp(double x, double dx_det, double r,
                               const TransportCoeffs& c) {
    const double kick = (r - 0.5) * (c.delta_max * std::fabs(dx_det));
    double xn = (x + dx_det) + kick;
    xn = xn > c.length_m ? c.length_m : xn;
    xn = xn < 0.0 ? 0.0 : xn;
    return xn;
}

// Deposition cell index and fractional offset for position x.
inline void ref_cell_weight(double x, double inv_dx, int n_nodes, int* k_out,
                            double* f_out) {
    int k = static_cast<int>(x * inv_dx);
    const int k_max = n_nodes - 2;
    k = k > k_max ? k_max : k;
    k = k < 0 ? 0 : k;
    *k_out = k;
    *f_out = x * inv_dx - static_cast<double>(k);
}

}  // namespace bfosim::kernels

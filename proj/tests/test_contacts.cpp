#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "bfosim/contacts.hpp"
#include "bfosim/errors.hpp"

using namespace bfosim;
using doctest::Approx;

namespace {

DeviceParameters table_defaults() { return DeviceParameters{}; }

// Independent scalar evaluation of the diode equations, written from the
// definition rather than via schottky_current.
double oracle_diode(double v, double phi_eV, double n, double t_K, double area,
                    double alpha_r, double richardson) {
    const double kT = 8.617333262e-5 * t_K;
    double i_r = area * richardson * t_K * t_K * std::exp(-phi_eV / kT);
    if (v < 0.0) i_r *= std::exp(alpha_r * std::sqrt(-v) / kT);
    return i_r * (std::exp(v / (n * kT)) - 1.0);
}

// Reference operating point: bisection on the device current with forward
// diode evaluation only (voltage inversion by inner bisection).
struct OraclePoint {
    double current;
    double v_top;
    double v_bot;
};

double oracle_invert(double target_i, double phi, double n, double t_K,
                     double area, double alpha_r, double richardson) {
    if (target_i == 0.0) return 0.0;
    double lo, hi;
    if (target_i > 0.0) {
        lo = 0.0;
        hi = 1.0;
        while (oracle_diode(hi, phi, n, t_K, area, alpha_r, richardson) < target_i) {
            hi *= 2.0;
            if (hi > 1e9) break;
        }
    } else {
        hi = 0.0;
        lo = -1.0;
        while (oracle_diode(lo, phi, n, t_K, area, alpha_r, richardson) > target_i) {
            lo *= 2.0;
            if (lo < -1e9) return -1e9;  // saturated
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (oracle_diode(mid, phi, n, t_K, area, alpha_r, richardson) < target_i) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

OraclePoint oracle_partition(double v_device, double q,
                             const DeviceParameters& p) {
    const double kT = 8.617333262e-5 * p.temperature_K;
    (void)kT;
    const double phi_t = p.phi0_top_eV * (1.0 + p.lambda_b_top * q);
    const double n_t = p.n0_top * (1.0 + p.lambda_n_top * q);
    const double phi_b = p.phi0_bot_eV * (1.0 + p.lambda_b_bot * q);
    const double n_b = p.n0_bot * (1.0 + p.lambda_n_bot * q);
    const double r_bulk = p.length_m / (p.conductivity_S_per_m * p.area_m2);

    auto mismatch = [&](double current) {
        const double v_t =
            oracle_invert(current, phi_t, n_t, p.temperature_K, p.area_m2,
                          p.alpha_r_eV_per_sqrtV, p.richardson_A_per_m2K2);
        const double v_b =
            oracle_invert(-current, phi_b, n_b, p.temperature_K, p.area_m2,
                          p.alpha_r_eV_per_sqrtV, p.richardson_A_per_m2K2);
        return v_t + current * r_bulk - v_b - v_device;
    };

    double lo = std::min(0.0, v_device / r_bulk * 1.01);
    double hi = std::max(0.0, v_device / r_bulk * 1.01);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mismatch(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    OraclePoint out;
    out.current = 0.5 * (lo + hi);
    out.v_top = oracle_invert(out.current, phi_t, n_t, p.temperature_K, p.area_m2,
                              p.alpha_r_eV_per_sqrtV, p.richardson_A_per_m2K2);
    out.v_bot = oracle_invert(-out.current, phi_b, n_b, p.temperature_K, p.area_m2,
                              p.alpha_r_eV_per_sqrtV, p.richardson_A_per_m2K2);
    return out;
}

}  // namespace

TEST_CASE("effective barrier response to the internal state") {
    ContactModel c{0.8, 4.2, 0.1, 0.05, 0.0, "test"};

    const auto at_zero = effective_barrier(c, 0.0);
    CHECK(at_zero.phi_eff_eV == 0.8);
    CHECK(at_zero.n_eff == 4.2);

    CHECK(effective_barrier(c, 0.5).phi_eff_eV == Approx(0.84).epsilon(1e-12));

    // Inverting the linear relations against the reported LRS endpoints
    // (0.85 -> 0.62 eV, 4.5 -> 3.3 at q = 0.9025) gives lambda ~ -0.30.
    const double q_lrs = 0.9025;
    const double lambda_b = (0.62 / 0.85 - 1.0) / q_lrs;
    const double lambda_n = (3.3 / 4.5 - 1.0) / q_lrs;
    CHECK(lambda_b == Approx(-0.30).epsilon(0.01));
    CHECK(lambda_n == Approx(-0.30).epsilon(0.02));
    ContactModel bottom{0.85, 4.5, lambda_b, lambda_n, 0.0, "bottom"};
    const auto lrs = effective_barrier(bottom, q_lrs);
    CHECK(lrs.phi_eff_eV == Approx(0.62).epsilon(1e-6));
    CHECK(lrs.n_eff == Approx(3.3).epsilon(1e-6));

    // Unphysical results are state errors.
    ContactModel harsh{0.8, 4.2, -1.5, -1.5, 0.0, "harsh"};
    CHECK_THROWS_AS(effective_barrier(harsh, 0.9), StateError);
}

TEST_CASE("schottky current point values") {
    const double t = 298.0, area = 4.0e-8, richardson = 1.20173e6;

    CHECK(schottky_current(0.0, 0.8, 4.2, t, area, 0.0, richardson) == 0.0);

    // Forward point check against the independent evaluation.
    const double got = schottky_current(0.2, 0.8, 4.2, t, area, 0.0, richardson);
    const double want = oracle_diode(0.2, 0.8, 4.2, t, area, 0.0, richardson);
    CHECK(std::fabs(got - want) < 1e-12 * std::fabs(want));
    CHECK(got == Approx(6.8e-10).epsilon(0.02));  // ~6.8e-10 A

    // alpha_r = 0 reduces the reverse branch to the plain diode law.
    const double rev = schottky_current(-0.2, 0.8, 4.2, t, area, 0.0, richardson);
    const double kT = 8.617333262e-5 * t;
    const double i_r = area * richardson * t * t * std::exp(-0.8 / kT);
    CHECK(rev ==
          Approx(-i_r * (1.0 - std::exp(-0.2 / (4.2 * kT)))).epsilon(1e-12));
    CHECK(rev < 0.0);

    // Continuity at zero bias.
    const double just_above =
        schottky_current(1e-12, 0.8, 4.2, t, area, 0.5, richardson);
    const double just_below =
        schottky_current(-1e-12, 0.8, 4.2, t, area, 0.5, richardson);
    CHECK(std::fabs(just_above - just_below) < 1e-20);
}

TEST_CASE("schottky current monotonicity") {
    const double t = 298.0, area = 4.0e-8, richardson = 1.20173e6;
    double prev = -1e300;
    for (double v = -2.0; v <= 2.0; v += 0.01) {
        const double i = schottky_current(v, 0.8, 4.2, t, area, 0.0, richardson);
        CHECK(i > prev);
        prev = i;
    }
    // With alpha_r > 0 the reverse magnitude is non-decreasing in |v|.
    double prev_mag = 0.0;
    for (double v = -0.01; v >= -8.0; v -= 0.05) {
        const double mag =
            -schottky_current(v, 0.8, 4.2, t, area, 0.5, richardson);
        CHECK(mag >= prev_mag);
        prev_mag = mag;
    }
}

TEST_CASE("exponential argument clamping is counted") {
    diagnostics::reset_exp_clamps();
    const double t = 298.0, area = 4.0e-8, richardson = 1.20173e6;
    // 200 V across a diode with n ~ 4: argument ~ 1850 >> bound.
    (void)schottky_current(200.0, 0.8, 4.2, t, area, 0.0, richardson);
    CHECK(diagnostics::exp_clamp_count() > 0);
    diagnostics::reset_exp_clamps();
}

TEST_CASE("bulk current follows Ohm's law") {
    const DeviceParameters p = table_defaults();
    CHECK(bulk_current(0.0, p) == 0.0);
    CHECK(bulk_current(1.0, p) == Approx(4.6667e-5).epsilon(1e-4));
    CHECK(bulk_current(2.0, p) == Approx(2.0 * bulk_current(1.0, p)).epsilon(1e-15));
}

TEST_CASE("partition solve: equilibrium and qualitative assignment") {
    DeviceParameters p = table_defaults();
    // Pure thermionic emission: the reverse-biased contact truly blocks.
    p.alpha_r_eV_per_sqrtV = 0.0;
    const ContactModel top = top_contact(p);
    const ContactModel bottom = bottom_contact(p);

    const CircuitState zero = solve_partition(0.0, 0.0, top, bottom, p);
    CHECK(zero.current_A == 0.0);
    CHECK(zero.v_sc_top_V == 0.0);
    CHECK(zero.v_bfo_V == 0.0);
    CHECK(zero.v_sc_bot_V == 0.0);

    // +2 V: reverse-biased bottom contact absorbs most of the voltage.
    const CircuitState pos = solve_partition(2.0, 0.0, top, bottom, p);
    CHECK(pos.current_A > 0.0);
    CHECK(pos.v_sc_bot_V < 0.0);
    CHECK(-pos.v_sc_bot_V > 0.5 * 2.0);
    CHECK(pos.v_sc_top_V > 0.0);

    // -2 V: top contact reverse-biased and absorbing most of the voltage.
    const CircuitState neg = solve_partition(-2.0, 0.0, top, bottom, p);
    CHECK(neg.current_A < 0.0);
    CHECK(neg.v_sc_top_V < 0.0);
    CHECK(-neg.v_sc_top_V > 0.5 * 2.0);

    // At the calibrated reverse softening the contact still reverse-biases
    // but leaks; the bulk takes over as the dominant drop at high bias.
    const DeviceParameters leaky = table_defaults();
    const CircuitState soft =
        solve_partition(8.5, 0.0, top_contact(leaky), bottom_contact(leaky), leaky);
    CHECK(soft.v_sc_bot_V < 0.0);
    CHECK(soft.v_bfo_V > 0.5 * 8.5);
}

TEST_CASE("partition solve matches the independent oracle") {
    DeviceParameters p = table_defaults();
    const ContactModel top = top_contact(p);
    const ContactModel bottom = bottom_contact(p);

    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> uv(-11.0, 11.0);
    std::uniform_real_distribution<double> uq(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double v = uv(gen);
        const double q = uq(gen);
        if (std::fabs(v) < 1e-3) continue;
        CAPTURE(v);
        CAPTURE(q);
        const CircuitState got = solve_partition(v, q, top, bottom, p);
        const OraclePoint want = oracle_partition(v, q, p);
        CHECK(std::fabs(got.current_A - want.current) <
              1e-8 * std::max(std::fabs(want.current), 1e-300));
        CHECK(got.kvl_residual_rel < 1e-9);
        CHECK(got.kcl_residual_rel < 1e-9);
        // KVL identity in the device convention.
        CHECK(got.v_sc_top_V + got.v_bfo_V - got.v_sc_bot_V ==
              Approx(v).epsilon(1e-9));
    }
}

TEST_CASE("solved current is strictly increasing in device voltage") {
    const DeviceParameters p = table_defaults();
    const ContactModel top = top_contact(p);
    const ContactModel bottom = bottom_contact(p);
    double prev = -1e300;
    for (double v = -10.0; v <= 10.0; v += 0.5) {
        const double i =
            solve_partition(v, 0.3, top, bottom, p).current_A;
        CHECK(i > prev);
        prev = i;
    }
}

TEST_CASE("raising either barrier height weakly decreases the current") {
    DeviceParameters p = table_defaults();
    for (const double v : {-8.0, -3.0, 2.0, 5.0, 8.5}) {
        const double base =
            std::fabs(solve_partition(v, 0.0, top_contact(p), bottom_contact(p), p)
                          .current_A);
        DeviceParameters higher_top = p;
        higher_top.phi0_top_eV += 0.1;
        const double with_top =
            std::fabs(solve_partition(v, 0.0, top_contact(higher_top),
                                      bottom_contact(higher_top), higher_top)
                          .current_A);
        DeviceParameters higher_bot = p;
        higher_bot.phi0_bot_eV += 0.1;
        const double with_bot =
            std::fabs(solve_partition(v, 0.0, top_contact(higher_bot),
                                      bottom_contact(higher_bot), higher_bot)
                          .current_A);
        CHECK(with_top <= base * (1.0 + 1e-9));
        CHECK(with_bot <= base * (1.0 + 1e-9));
    }
}

TEST_CASE("partition solve is deterministic") {
    const DeviceParameters p = table_defaults();
    const CircuitState a =
        solve_partition(7.3, 0.42, top_contact(p), bottom_contact(p), p);
    const CircuitState b =
        solve_partition(7.3, 0.42, top_contact(p), bottom_contact(p), p);
    CHECK(a.current_A == b.current_A);
    CHECK(a.v_sc_top_V == b.v_sc_top_V);
    CHECK(a.v_bfo_V == b.v_bfo_V);
    CHECK(a.v_sc_bot_V == b.v_sc_bot_V);
}

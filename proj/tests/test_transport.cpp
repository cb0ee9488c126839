#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bfosim/errors.hpp"
#include "bfosim/rng.hpp"
#include "bfosim/transport.hpp"

using namespace bfosim;
using doctest::Approx;

namespace {
DeviceParameters table_defaults() { return DeviceParameters{}; }
}

TEST_CASE("activation profile: floor, peak, ramp midpoint") {
    const DeviceParameters p = table_defaults();

    CHECK(activation_profile(0.0, p) == Approx(0.55).epsilon(1e-12));
    CHECK(activation_profile(p.length_m, p) == Approx(0.75).epsilon(1e-12));
    CHECK(activation_profile(575.0e-9, p) == Approx(0.65).epsilon(1e-9));
    CHECK(activation_profile(550.0e-9, p) == Approx(0.55).epsilon(1e-12));
    CHECK(activation_profile(300.0e-9, p) == Approx(0.55).epsilon(1e-12));

    CHECK_THROWS_AS(activation_profile(-1.0e-9, p), DomainError);
    CHECK_THROWS_AS(activation_profile(p.length_m + 1.0e-9, p), DomainError);

    // Monotone non-decreasing and continuous across the ramp onset.
    double prev = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double x = std::min(i * 1.0e-9, p.length_m);
        const double ua = activation_profile(x, p);
        CHECK(ua >= prev);
        prev = ua;
    }
    const double below = activation_profile(550.0e-9 - 1.0e-12, p);
    const double above = activation_profile(550.0e-9 + 1.0e-12, p);
    CHECK(std::fabs(above - below) < 2e-5);  // slope * 2e-12 m

    // The ramp onset scales with the device length.
    DeviceParameters shorter = p;
    shorter.length_m = 300.0e-9;
    CHECK(activation_profile(0.5 * (550.0 / 600.0 + 1.0) * 300.0e-9, shorter) ==
          Approx(0.65).epsilon(1e-9));
}

TEST_CASE("effective activation tilt") {
    const DeviceParameters p = table_defaults();  // lambda_U = 0.0012

    CHECK(effective_activation(0.55, 0.0, 100.0e-9, p) == 0.55);
    CHECK(effective_activation(0.75, 123.0, p.length_m, p) == Approx(0.75).epsilon(1e-12));

    DeviceParameters tuned = p;
    tuned.lambda_U = 0.01;
    CHECK(effective_activation(0.55, 8.5, 0.0, tuned) == Approx(0.635).epsilon(1e-12));

    CHECK_THROWS_AS(effective_activation(0.55, 1.0, -1.0e-9, p), DomainError);
}

TEST_CASE("drift velocity: zero field, antisymmetry, point value") {
    DeviceParameters p = table_defaults();
    p.lambda_T = 0.0;

    CHECK(drift_velocity(0.0, 0.55, p) == 0.0);

    const double v_pos = drift_velocity(1.0e7, 0.60, p);
    const double v_neg = drift_velocity(-1.0e7, 0.60, p);
    CHECK(v_pos > 0.0);
    CHECK(v_neg == -v_pos);  // bit-exact antisymmetry of the sinh bracket

    // Independent evaluation of the hop-transport law at the workhorse point.
    const double kT = 8.617333262e-5 * 298.0;
    const double a = 0.56e-9 * 1.4e7 / (2.0 * kT);
    const double expected =
        1.0e12 * 0.56e-9 * std::exp(-0.55 / kT) * (std::exp(a) - std::exp(-a));
    const double got = drift_velocity(1.4e7, 0.55, p);
    CHECK(got == Approx(expected).epsilon(1e-12));
    CHECK(got == Approx(8.6e-8).epsilon(0.01));
}

TEST_CASE("drift velocity: temperature response and friction factor") {
    DeviceParameters p = table_defaults();

    double prev = 0.0;
    for (double t = 298.0; t <= 348.0; t += 10.0) {
        DeviceParameters warm = p;
        warm.temperature_K = t;
        const double v = drift_velocity(1.0e7, 0.55, warm);
        CHECK(v > prev);
        prev = v;
    }

    DeviceParameters frictional = p;
    frictional.lambda_T = 0.062;
    CHECK(drift_velocity(1.0e7, 0.55, frictional) ==
          Approx((1.0 - 0.062) * drift_velocity(1.0e7, 0.55, p)).epsilon(1e-14));
}

TEST_CASE("trapping ratio: deep ramp vs floor") {
    const DeviceParameters p = table_defaults();
    const double ratio =
        drift_velocity(1.0e7, 0.75, p) / drift_velocity(1.0e7, 0.55, p);
    CHECK(ratio == Approx(4.1e-4).epsilon(0.02));  // exp(-0.20 / kT)
}

TEST_CASE("stochastic perturbation") {
    // delta = 0: exact deterministic motion.
    CHECK(perturbed_position(10.0e-9, 2.0e-9, 0.93, 0.0, 600.0e-9) ==
          Approx(12.0e-9).epsilon(1e-15));
    // r = 0.5: centred noise vanishes for any delta.
    CHECK(perturbed_position(10.0e-9, 2.0e-9, 0.5, 0.7, 600.0e-9) ==
          Approx(12.0e-9).epsilon(1e-15));
    // Worked example: dx = 1 nm, delta = 0.5, r = 1 -> 1.25 nm advance.
    CHECK(perturbed_position(0.0, 1.0e-9, 1.0, 0.5, 600.0e-9) ==
          Approx(1.25e-9).epsilon(1e-12));
    // Clamping at both walls.
    CHECK(perturbed_position(599.5e-9, 2.0e-9, 0.5, 0.0, 600.0e-9) == 600.0e-9);
    CHECK(perturbed_position(0.5e-9, -2.0e-9, 0.5, 0.0, 600.0e-9) == 0.0);
}

TEST_CASE("stochastic perturbation has zero mean") {
    rng::SequencedRng gen(31, rng::Stream::sampling);
    const double dx = 1.0e-9, delta = 0.5;
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += perturbed_position(300.0e-9, dx, gen.uniform(), delta, 600.0e-9) -
               (300.0e-9 + dx);
    }
    const double mean = sum / n;
    // sd of one kick = delta * dx / sqrt(12)
    const double se = delta * dx / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(mean) < 3.0 * se);
}

TEST_CASE("hop attempt rate") {
    const DeviceParameters p = table_defaults();
    CHECK(hop_attempt_rate(0.75, p) == Approx(0.207).epsilon(0.01));
    CHECK(hop_attempt_rate(0.55, p) / hop_attempt_rate(0.75, p) ==
          Approx(std::exp(0.20 / p.thermal_energy_eV())).epsilon(1e-12));
}

TEST_CASE("transport config validation") {
    TransportConfig cfg;
    cfg.validate();
    cfg.dt_s = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dt_s = 1e-3;
    cfg.retention_move_prob = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

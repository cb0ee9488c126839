#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "bfosim/device.hpp"
#include "bfosim/errors.hpp"

using namespace bfosim;
using doctest::Approx;

namespace {

TransportConfig fast_transport() {
    TransportConfig t;
    t.dt_s = 1.0e-3;
    return t;
}

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("ensemble initialisation") {
    SUBCASE("uniform placement mean is near the device midpoint") {
        const auto e = init_ensemble(10000, 600.0e-9, 4.8e8, 0.0, 42);
        CHECK(e.mobile_positions_m.size() == e.fixed_positions_m.size());
        CHECK(std::fabs(mean_position_m(e) - 300.0e-9) < 5.0e-9);
        CHECK(e.particle_weight == Approx(4.8e8 / 10000.0));
        for (const double x : e.mobile_positions_m) {
            CHECK(x >= 0.0);
            CHECK(x <= 600.0e-9);
        }
    }

    SUBCASE("rescaling pins the achieved initial mean") {
        const auto e = init_ensemble(5000, 600.0e-9, 4.8e8, 295.4e-9, 42);
        CHECK(e.initial_mean_position_m == Approx(295.4e-9).epsilon(1e-9));
        CHECK(internal_state(e) == 0.0);
    }

    SUBCASE("same seed twice gives bitwise-identical ensembles") {
        const auto a = init_ensemble(2000, 600.0e-9, 4.8e8, 0.0, 7);
        const auto b = init_ensemble(2000, 600.0e-9, 4.8e8, 0.0, 7);
        for (std::size_t i = 0; i < a.mobile_positions_m.size(); ++i) {
            CHECK(same_bits(a.mobile_positions_m[i], b.mobile_positions_m[i]));
            CHECK(same_bits(a.fixed_positions_m[i], b.fixed_positions_m[i]));
        }
    }

    SUBCASE("fewer than two particles is a configuration error") {
        CHECK_THROWS_AS(init_ensemble(1, 600.0e-9, 4.8e8, 0.0, 1), ConfigError);
    }
}

TEST_CASE("internal state q(t)") {
    VacancyEnsemble e;
    CHECK_THROWS_AS(internal_state(e), StateError);

    e.mobile_positions_m = {562.0e-9, 562.0e-9};
    e.initial_mean_position_m = 295.4e-9;
    CHECK(internal_state(e) == Approx(0.9025).epsilon(1e-4));

    e.mobile_positions_m = {268.0e-9, 268.0e-9};
    CHECK(internal_state(e) == Approx(-0.0928).epsilon(1e-3));

    e.mobile_positions_m = {295.4e-9, 295.4e-9};
    CHECK(internal_state(e) == Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("device construction validates parameters") {
    DeviceParameters p;
    p.n0_top = 0.5;  // ideality below one
    CHECK_THROWS_WITH_AS(Device(p, fast_transport(), 61, 100, 1),
                         doctest::Contains("n0_top"), ConfigError);

    DeviceParameters q;
    q.lambda_n_bot = -0.99;  // n_eff < 1 somewhere in the reachable q range
    CHECK_THROWS_AS(Device(q, fast_transport(), 61, 100, 1), ConfigError);
}

TEST_CASE("device exposes the zero-bias activation profile per node") {
    DeviceParameters p;
    Device dev(p, fast_transport(), 61, 100, 3);
    const auto& ua = dev.state().activation_profile_eV;
    REQUIRE(ua.size() == 61);
    CHECK(ua.front() == Approx(0.55).epsilon(1e-12));
    CHECK(ua.back() == Approx(0.75).epsilon(1e-12));
}

TEST_CASE("zero-input step is an equilibrium") {
    DeviceParameters p;
    Device dev(p, fast_transport(), 301, 1000, 9);
    const double q0 = dev.state().q;
    const TraceRecord r = dev.step(0.0);
    CHECK(r.i_device_A == 0.0);
    CHECK(r.v_sc_top_V == 0.0);
    CHECK(r.v_bfo_V == 0.0);
    CHECK(r.v_sc_bot_V == 0.0);
    CHECK(r.q == q0);
    // Only round-off scale motion from the balanced space-charge noise.
    CHECK(std::fabs(dev.state().q - q0) < 1e-5);
}

TEST_CASE("held positive bias drifts the ensemble toward the bottom contact") {
    DeviceParameters p;
    p.target_mean_position_m = 295.4e-9;
    Device dev(p, fast_transport(), 301, 1000, 12);
    double prev = dev.state().mean_position_m;
    for (int k = 0; k < 200; ++k) {
        dev.step(8.5);
    }
    CHECK(dev.state().mean_position_m > prev);
    // Positive field, positive charge: every step's mean displacement >= 0.
    Device dev2(p, fast_transport(), 301, 1000, 12);
    for (int k = 0; k < 50; ++k) {
        const double before = dev2.state().mean_position_m;
        dev2.step(8.5);
        CHECK(dev2.state().mean_position_m >= before - 1e-15);
    }
}

TEST_CASE("step is bitwise deterministic for a fixed seed") {
    DeviceParameters p;
    Device a(p, fast_transport(), 301, 500, 77);
    Device b(p, fast_transport(), 301, 500, 77);
    for (int k = 0; k < 50; ++k) {
        const double v = 8.5 * k / 50.0;
        const TraceRecord ra = a.step(v);
        const TraceRecord rb = b.step(v);
        CHECK(same_bits(ra.i_device_A, rb.i_device_A));
        CHECK(same_bits(ra.q, rb.q));
        CHECK(same_bits(ra.d_mean_m, rb.d_mean_m));
        CHECK(same_bits(ra.v_sc_bot_V, rb.v_sc_bot_V));
    }
    for (std::size_t i = 0; i < a.ensemble().size(); ++i) {
        CHECK(same_bits(a.ensemble().mobile_positions_m[i],
                        b.ensemble().mobile_positions_m[i]));
    }
}

TEST_CASE("particle count and represented charge are conserved") {
    DeviceParameters p;
    Device dev(p, fast_transport(), 301, 1000, 5);
    const std::size_t n0 = dev.ensemble().size();
    const double w0 = dev.ensemble().particle_weight;
    const auto fixed0 = dev.ensemble().fixed_positions_m;

    for (int k = 0; k < 100; ++k) dev.step(6.0);

    CHECK(dev.ensemble().size() == n0);
    CHECK(dev.ensemble().particle_weight == w0);
    for (std::size_t i = 0; i < n0; ++i) {
        CHECK(same_bits(dev.ensemble().fixed_positions_m[i], fixed0[i]));
        CHECK(dev.ensemble().mobile_positions_m[i] >= 0.0);
        CHECK(dev.ensemble().mobile_positions_m[i] <= p.length_m);
    }

    // Balanced species: net deposited charge stays ~0 relative to one
    // species' magnitude.
    const double species_charge = static_cast<double>(n0) * w0 *
                                  constants::elementary_charge_C;
    CHECK(std::fabs(field::grid_total_charge_C(dev.grid(), p.area_m2)) <
          1e-9 * species_charge);
}

TEST_CASE("q always matches the ensemble mean") {
    DeviceParameters p;
    Device dev(p, fast_transport(), 301, 500, 21);
    for (int k = 0; k < 60; ++k) {
        dev.step(7.0);
        CHECK(dev.state().q == Approx(internal_state(dev.ensemble())).epsilon(1e-14));
    }
}

TEST_CASE("zero-bias mean position drift stays within the jitter scale") {
    DeviceParameters p;
    p.lambda_U = 0.0;
    Device dev(p, fast_transport(), 301, 500, 33);
    const double d0 = dev.state().mean_position_m;
    for (int k = 0; k < 1000; ++k) dev.step(0.0);
    CHECK(std::fabs(dev.state().mean_position_m - d0) < 0.1e-9);
}

TEST_CASE("runaway effective activation stays contained") {
    // lambda_U at its upper bound under reverse bias pushes U_A,eff far
    // below zero near the top contact; sub-stepping and the wall clamp
    // must keep every position finite and inside the device.
    DeviceParameters p;
    p.lambda_U = 0.9;
    p.lambda_b_bot = 0.0;  // decouple contacts so q excursions stay legal
    p.lambda_n_bot = 0.0;
    p.lambda_b_top = 0.0;
    p.lambda_n_top = 0.0;
    TransportConfig t = fast_transport();
    Device dev(p, t, 301, 500, 2);
    diagnostics::reset_exp_clamps();
    for (int k = 0; k < 5; ++k) dev.step(-8.5);
    for (const double x : dev.ensemble().mobile_positions_m) {
        CHECK(std::isfinite(x));
        CHECK(x >= 0.0);
        CHECK(x <= p.length_m);
    }
    diagnostics::reset_exp_clamps();
}

TEST_CASE("retention: fully gated off means frozen positions") {
    DeviceParameters p;
    TransportConfig t = fast_transport();
    t.retention_move_prob = 0.0;
    Device dev(p, t, 301, 500, 4);
    const auto before = dev.ensemble().mobile_positions_m;
    for (int k = 0; k < 10; ++k) dev.retention_evolve(10.0);
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(same_bits(before[i], dev.ensemble().mobile_positions_m[i]));
    }
}

TEST_CASE("read is non-perturbative") {
    DeviceParameters p;
    Device dev(p, fast_transport(), 301, 500, 8);
    for (int k = 0; k < 10; ++k) dev.step(5.0);
    const auto before = dev.ensemble().mobile_positions_m;
    const TraceRecord r1 = dev.read(2.0);
    const TraceRecord r2 = dev.read(2.0);
    CHECK(same_bits(r1.i_device_A, r2.i_device_A));
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(same_bits(before[i], dev.ensemble().mobile_positions_m[i]));
    }
}

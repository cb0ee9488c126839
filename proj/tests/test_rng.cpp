#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bfosim/errors.hpp"
#include "bfosim/rng.hpp"

using namespace bfosim;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors from the published test set for this generator.
    auto b = rng::philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(b.word[0] == 0x6627e8d5u);
    CHECK(b.word[1] == 0xe169c58du);
    CHECK(b.word[2] == 0xbc57ac4cu);
    CHECK(b.word[3] == 0x9b00dbd8u);

    b = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu});
    CHECK(b.word[0] == 0x408f276du);
    CHECK(b.word[1] == 0x41c83b0eu);
    CHECK(b.word[2] == 0xa20bc7c6u);
    CHECK(b.word[3] == 0x6d5451fdu);

    b = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u});
    CHECK(b.word[0] == 0xd16cfe09u);
    CHECK(b.word[1] == 0x94fdccebu);
    CHECK(b.word[2] == 0x5001e420u);
    CHECK(b.word[3] == 0x24126ea1u);
}

TEST_CASE("counter rng: range, determinism, stream separation") {
    rng::CounterRng a(12345), b(12345), c(54321);
    double mean = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = a.uniform(rng::Stream::push_jitter, 7, i, 0);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == b.uniform(rng::Stream::push_jitter, 7, i, 0));
        mean += u;
    }
    mean /= 10000.0;
    CHECK(std::fabs(mean - 0.5) < 0.01);  // se = 0.0029

    // Different seeds, streams, steps, and slots give different draws.
    CHECK(a.uniform(rng::Stream::push_jitter, 7, 3, 0) !=
          c.uniform(rng::Stream::push_jitter, 7, 3, 0));
    CHECK(a.uniform(rng::Stream::push_jitter, 7, 3, 0) !=
          a.uniform(rng::Stream::retention, 7, 3, 0));
    CHECK(a.uniform(rng::Stream::push_jitter, 7, 3, 0) !=
          a.uniform(rng::Stream::push_jitter, 8, 3, 0));
    CHECK(a.uniform(rng::Stream::push_jitter, 7, 3, 0) !=
          a.uniform(rng::Stream::push_jitter, 7, 3, 1));
}

TEST_CASE("sequenced rng: gaussian moments") {
    rng::SequencedRng gen(99, rng::Stream::sampling);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = gen.gaussian();
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::fabs(var - 1.0) < 0.02);
}

namespace {

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("truncated gaussian: bounds, sd = 0, analytic mean") {
    rng::SequencedRng gen(7, rng::Stream::sampling);

    CHECK(gen.truncated_gaussian(5.0, 0.0, 0.0, 10.0) == 5.0);

    // [lo, hi] far outside mean +- 8 sd is a configuration error.
    CHECK_THROWS_AS(gen.truncated_gaussian(0.0, 1.0, 9.0, 10.0), ConfigError);
    CHECK_THROWS_AS(gen.truncated_gaussian(0.0, 1.0, 2.0, 1.0), ConfigError);
    CHECK_THROWS_AS(gen.truncated_gaussian(0.0, -1.0, -1.0, 1.0), ConfigError);

    // Sample mean against the analytic truncated-normal mean.
    const double mu = 2.0, sd = 1.5, lo = 0.5, hi = 4.0;
    const double a = (lo - mu) / sd, b = (hi - mu) / sd;
    const double z = std_normal_cdf(b) - std_normal_cdf(a);
    const double expected_mean = mu + sd * (std_normal_pdf(a) - std_normal_pdf(b)) / z;

    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = gen.truncated_gaussian(mu, sd, lo, hi);
        CHECK(x >= lo);
        CHECK(x <= hi);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double se = std::sqrt(var / n);
    CHECK(std::fabs(mean - expected_mean) < 3.0 * se);
}

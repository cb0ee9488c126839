#include "bfosim/rng.hpp"

#include <cmath>
#include <string>

#include "bfosim/errors.hpp"

namespace bfosim::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b,
                    std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline void round_once(std::array<std::uint32_t, 4>& c,
                       const std::array<std::uint32_t, 2>& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Block philox4x32(const std::array<std::uint32_t, 4>& counter,
                 const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        round_once(c, k);
    }
    return Block{c};
}

namespace {

inline Block keyed_block(std::uint64_t seed, Stream stream, std::uint64_t step,
                         std::uint64_t element, std::uint32_t pair) {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(element),
        static_cast<std::uint32_t>(element >> 32) ^ static_cast<std::uint32_t>(step),
        static_cast<std::uint32_t>(step >> 32),
        (static_cast<std::uint32_t>(stream) << 8) | pair,
    };
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
    };
    return philox4x32(counter, key);
}

}  // namespace

double CounterRng::uniform(Stream stream, std::uint64_t step,
                           std::uint64_t element, std::uint32_t slot) const {
    const Block b = keyed_block(seed_, stream, step, element, slot >> 1);
    const std::uint32_t base = (slot & 1u) * 2u;
    return to_unit_double(b.word[base], b.word[base + 1]);
}

std::uint64_t CounterRng::uniform_u64(Stream stream, std::uint64_t step,
                                      std::uint64_t element) const {
    const Block b = keyed_block(seed_, stream, step, element, 0);
    return (static_cast<std::uint64_t>(b.word[0]) << 32) | b.word[1];
}

double SequencedRng::uniform() {
    return rng_.uniform(stream_, instance_, counter_++, 0);
}

double SequencedRng::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_gaussian_;
    }
    // Box-Muller; u1 shifted away from zero so log() stays finite.
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    cached_gaussian_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

double SequencedRng::truncated_gaussian(double mean, double sd, double lo,
                                        double hi) {
    if (!(lo < hi)) {
        throw ConfigError("truncated_gaussian: lo must be < hi");
    }
    if (sd < 0.0) {
        throw ConfigError("truncated_gaussian: sd must be >= 0");
    }
    if (sd == 0.0) {
        if (mean < lo || mean > hi) {
            throw ConfigError("truncated_gaussian: sd = 0 and mean outside [lo, hi]");
        }
        return mean;
    }
    if (hi < mean - 8.0 * sd || lo > mean + 8.0 * sd) {
        throw ConfigError("truncated_gaussian: [lo, hi] excludes mean +- 8 sd");
    }
    constexpr int kMaxAttempts = 1000000;
    for (int i = 0; i < kMaxAttempts; ++i) {
        const double x = mean + sd * gaussian();
        if (x >= lo && x <= hi) return x;
    }
    throw ConfigError("truncated_gaussian: acceptance region too small after " +
                      std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace bfosim::rng

#pragma once

// Counter-based pseudo-random numbers (Philox-4x32-10).
//
// Every draw is a pure function of (seed, stream, counter), so particle
// pushes can be evaluated in any order -- or in SIMD lanes -- and still
// reproduce bit-identical streams.

#include <array>
#include <cstdint>

namespace bfosim::rng {

struct Block {
    std::array<std::uint32_t, 4> word;
};

// One Philox-4x32 block with 10 rounds.
Block philox4x32(const std::array<std::uint32_t, 4>& counter,
                 const std::array<std::uint32_t, 2>& key);

// Maps 64 random bits onto a double in [0, 1) with 53-bit resolution.
inline double to_unit_double(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Named sub-streams. Keeping them disjoint means adding draws to one
// phase never shifts another phase's sequence.
enum class Stream : std::uint32_t {
    init_mobile    = 1,
    init_fixed     = 2,
    push_jitter    = 3,
    retention      = 4,
    device_seeds   = 5,
    sampling       = 6,
    acceptance     = 7,
};

// Random-access generator: one uniform per (stream, step, element, slot).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // slot in [0, 3]; slots 0/1 and 2/3 come from two adjacent blocks.
    double uniform(Stream stream, std::uint64_t step, std::uint64_t element,
                   std::uint32_t slot) const;

    std::uint64_t uniform_u64(Stream stream, std::uint64_t step,
                              std::uint64_t element) const;

private:
    std::uint64_t seed_;
};

// Sequential view over one stream, for initialisation and rejection
// sampling where the number of draws is data-dependent.
class SequencedRng {
public:
    SequencedRng(std::uint64_t seed, Stream stream, std::uint64_t instance = 0)
        : rng_(seed), stream_(stream), instance_(instance) {}

    double uniform();                 // [0, 1)
    double gaussian();                // standard normal (Box-Muller)

    // Rejection sampling from N(mean, sd) restricted to [lo, hi].
    // Throws ConfigError when [lo, hi] lies outside mean +- 8 sd.
    double truncated_gaussian(double mean, double sd, double lo, double hi);

private:
    CounterRng rng_;
    Stream stream_;
    std::uint64_t instance_;
    std::uint64_t counter_ = 0;
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace bfosim::rng

#pragma once

// Pinned pseudo-random generators. Every seeded artifact in the simulator
// (AP fields, rate traces, location errors, relocations) is drawn from the
// generators below, so a given seed yields the same numbers on any platform
// and in any language that implements the same recurrences.
//
// SplitMix64 (used for seeding):
//     state += 0x9E3779B97F4A7C15
//     z = state
//     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//     return z ^ (z >> 31)
//
// xoshiro256** (the working generator), state s[0..3] seeded with four
// consecutive SplitMix64 outputs:
//     result = rotl(s[1] * 5, 7) * 9
//     t = s[1] << 17
//     s[2] ^= s[0]; s[3] ^= s[1]; s[1] ^= s[2]; s[0] ^= s[3]
//     s[2] ^= t;    s[3] = rotl(s[3], 45)
//
// Doubles are formed from the top 53 bits: (x >> 11) * 2^-53.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace locswitch {

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256 {
public:
    explicit constexpr Xoshiro256(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    constexpr std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in the open interval (0, 1).
    double uniform_open01() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes two draws per call.
    double normal() noexcept {
        const double u1 = uniform_open01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

/// Independent named streams carved out of one run seed, so that adding draws
/// to one consumer never perturbs another.
enum class Stream : std::uint64_t {
    Field = 1,
    Trace = 2,
    Location = 3,
    Mobility = 4,
};

inline Xoshiro256 make_stream(std::uint64_t seed, Stream stream) noexcept {
    SplitMix64 mix(seed ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ULL));
    return Xoshiro256(mix.next());
}

}  // namespace locswitch

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace twochoice {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer, used both as a seed expander and as a mixing hash.
inline constexpr std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += kGolden;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + kGolden + (a << 6) + (a >> 2));
    return splitmix64_next(x);
}

inline constexpr std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

// Deterministic generator (xoshiro256**) keyed by (seed, stream).
//
// Streams with distinct indices are independent for practical purposes and
// fully reproducible regardless of evaluation order, which is what makes
// trial-level parallelism deterministic.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        std::uint64_t x = detail::mix64(detail::mix64(seed, 0x8000000000000001ULL), stream);
        for (auto& w : s_) w = detail::splitmix64_next(x);
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = detail::kGolden;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Independent child stream; (seed, stream, index) -> new stream key.
    RandomSource substream(std::uint64_t index) const {
        return RandomSource(seed_, detail::mix64(stream_ + 1, index));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound); bound >= 1. Lemire multiply-high with rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Exponential variate with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::array<std::uint64_t, 4> s_;
};

} // namespace twochoice

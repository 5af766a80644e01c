#pragma once

#include <cstdint>
#include <random>

namespace tomoqa {

// splitmix64 finalizer (Steele, Lea & Flood 2014). Used to derive
// independent substream seeds from a user seed, so that e.g. noise
// views and annealing reads never share a stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream domains keep substreams of different subsystems disjoint even
// when they use the same user seed and index.
namespace stream_domain {
inline constexpr std::uint64_t kNoiseView = 1;
inline constexpr std::uint64_t kAnnealRead = 2;
inline constexpr std::uint64_t kHybrid = 3;
}  // namespace stream_domain

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t domain,
                                    std::uint64_t index) {
    return splitmix64(splitmix64(seed + 0x9e3779b97f4a7c15ULL * domain) + index);
}

// Deterministic draws on top of std::mt19937_64. The engine's output
// sequence is fixed by the standard; the distributions below are written
// out explicitly because std::uniform_*_distribution is not portable
// across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased uniform draw from [0, n), n >= 1, by rejection.
    int bounded(int n) {
        const auto bound = static_cast<std::uint64_t>(n);
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return static_cast<int>(r % bound);
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool coin() { return (next_u64() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace tomoqa

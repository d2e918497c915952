// Seeded uniform stream and seed-derivation helpers.
//
// All randomness in the library flows through UniformStream so that runs are
// reproducible from a single integer seed. The stream is a counter-mode
// SplitMix64 generator: construction is one store, draws are a few integer
// ops, and the sequence is identical on every platform (no reliance on
// std::uniform_real_distribution or a heavyweight engine).
#pragma once

#include <cstdint>

namespace agefl {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer; also used to derive well-separated sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden64;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Derive the seed for a named sub-stream (selection, evaluation, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed + tag * kGolden64) ^ (tag * 0xD1B54A32D192ED03ull);
}

class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden64;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Uniform draw strictly inside (0,1): 53 significant bits, offset by half
    // a grid cell so 0 and 1 are never produced.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

} // namespace agefl

#pragma once

#include <cstdint>

namespace dmdcp {

/// Deterministic uniform stream over (0,1), SplitMix64 state evolution.
/// The same seed always yields the same sequence, independent of
/// platform and standard library.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Strictly inside (0,1): (k + 0.5) / 2^53 for k in [0, 2^53).
    double next() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Strictly inside (-1,1).
    double next_signed() { return 2.0 * next() - 1.0; }

private:
    std::uint64_t state_;
};

}  // namespace dmdcp

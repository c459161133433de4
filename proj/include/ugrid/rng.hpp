/// @file rng.hpp
/// @brief Deterministic random numbers with a stable cross-platform stream.
///
/// Distributions are derived from raw 64-bit draws by fixed arithmetic, not
/// std:: distribution objects, so the same seed produces the same bytes on
/// every standard library.

#pragma once

#include <cstdint>

namespace ugrid {

/// splitmix64; passes through every 64-bit state exactly once.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] (inclusive).
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    bool coin() { return (next_u64() & 1) != 0; }

    /// Independent substream; decouples consumers from each other's draw counts.
    Rng fork() { return Rng(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace ugrid

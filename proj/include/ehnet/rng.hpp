#pragma once

// Random stream contract. Trajectories are reproducible bit-for-bit across
// platforms because every piece below is fully specified:
//
//   engine   std::mt19937_64 constructed directly from the 64-bit seed
//            (the standard fixes its algorithm and constants)
//   uniform  (engine() >> 11) * 2^-53, a double in [0, 1)
//   mixing   splitmix64 finalizer, see mix_seed()

#include <array>
#include <cstdint>
#include <random>

namespace ehnet {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Per-grid-point seed: splitmix64(splitmix64(splitmix64(base) ^ row) ^ col).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t row, std::uint64_t col) {
    return splitmix64(splitmix64(splitmix64(base) ^ row) ^ col);
}

class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <std::size_t N>
    void fill(std::array<double, N>& out) {
        for (auto& u : out) u = next();
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ehnet

#pragma once

#include <cstdint>

namespace sepm {

/// Counter-based generator: every draw is a pure function of
/// (seed, index, stream), so parallel and serial evaluation orders produce
/// identical streams. The mixer is the splitmix64 finalizer applied to a
/// combined counter.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t word(std::uint64_t index, std::uint64_t stream) const {
        std::uint64_t z = seed_;
        z = mix(z + 0x9E3779B97F4A7C15ULL * (index + 1));
        z = mix(z ^ (0xBF58476D1CE4E5B9ULL * (stream + 1)));
        return mix(z);
    }

    /// uniform double in [0, 1)
    double uniform(std::uint64_t index, std::uint64_t stream) const {
        return static_cast<double>(word(index, stream) >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
};

}  // namespace sepm

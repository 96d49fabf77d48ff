#pragma once

#include <cstdint>

namespace actsig {

// splitmix64. The whole state is one word, so any seed/stream pair maps to a
// reproducible sequence on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Independent sub-stream: used to give each sample dimension (or each
    // purpose) its own sequence derived from a single user seed.
    SplitMix64(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed ^ mix(stream + kGolden))) {}

    std::uint64_t next() {
        state_ += kGolden;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit) {
            x = next();
        }
        return x % bound;
    }

    std::uint64_t operator()() { return next(); }

    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace actsig

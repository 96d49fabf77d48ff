#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "actsig/errors.hpp"
#include "actsig/signatures.hpp"

namespace actsig {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
inline constexpr std::uint64_t kDefaultMasterSeed = 42;

__extension__ using uint128 = unsigned __int128;

// (a * x + b) mod 2^61-1 without overflow.
inline std::uint64_t mul_add_mod61(std::uint64_t a, std::uint64_t x, std::uint64_t b) {
    const uint128 v = static_cast<uint128>(a) * x + b;
    std::uint64_t r = static_cast<std::uint64_t>(v & kMersenne61) +
                      static_cast<std::uint64_t>(v >> 61);
    r = (r & kMersenne61) + (r >> 61);
    return r >= kMersenne61 ? r - kMersenne61 : r;
}

struct HashParams {
    std::uint64_t a = 1;  // in [1, p-1]
    std::uint64_t b = 0;  // in [0, p-1]

    bool operator==(const HashParams&) const = default;
};

// K multiply-add hashes h_t(s) = (a_t (s+1) + b_t) mod (2^61 - 1), all drawn
// from one splitmix stream seeded with master_seed.
struct HashFamily {
    std::size_t k = 0;
    std::uint64_t master_seed = kDefaultMasterSeed;
    std::vector<HashParams> params;

    std::uint64_t hash(std::size_t t, std::uint64_t sample_index) const {
        return mul_add_mod61(params[t].a, sample_index + 1, params[t].b);
    }
};

HashFamily build_hash_family(std::size_t k, std::uint64_t master_seed = kDefaultMasterSeed);

struct MinHashSketch {
    std::vector<std::uint64_t> values;
    std::size_t k = 0;
    std::uint64_t master_seed = kDefaultMasterSeed;

    bool operator==(const MinHashSketch&) const = default;
};

// K >= 2 ln(2/alpha) / delta^2, rounded up. DomainError outside
// alpha in (0,1), delta in (0,1].
std::size_t required_hashes(double alpha, double delta);

// True when a requested distance resolution is finer than the sample can
// express (delta < 1/n_samples). Callers surface this as a warning.
bool below_resolution(double delta, std::size_t n_samples);

// Min over the set of hash(t, s) for t in [0, k). Works with any hash callable;
// the production family and test permutations share this path.
template <class Hash>
MinHashSketch sketch_with(std::span<const std::uint32_t> active, std::size_t k, Hash&& hash,
                          std::uint64_t master_seed) {
    if (active.empty()) {
        throw EmptySetError("cannot sketch an empty activation set (dead neuron not filtered)");
    }
    MinHashSketch out{std::vector<std::uint64_t>(k, ~std::uint64_t{0}), k, master_seed};
    for (std::uint32_t s : active) {
        for (std::size_t t = 0; t < k; ++t) {
            const std::uint64_t h = hash(t, static_cast<std::uint64_t>(s));
            out.values[t] = h < out.values[t] ? h : out.values[t];
        }
    }
    return out;
}

MinHashSketch sketch(std::span<const std::uint32_t> active, const HashFamily& family);

// Fraction of coordinates where the sketches disagree. FamilyMismatch if the
// sketches come from different families.
double estimate_distance(const MinHashSketch& a, const MinHashSketch& b);

using LayerSketches = std::map<std::size_t, MinHashSketch>;

// One sketch per representative neuron, keyed by its index.
LayerSketches sketch_layer(const SignatureMatrix& m, const NeuronFilterReport& report,
                           const HashFamily& family);

// {"k":..,"master_seed":..,"sketches":{"<neuron>":[...]}}
std::string serialize_sketches(const LayerSketches& sketches, std::size_t k,
                               std::uint64_t master_seed);
LayerSketches parse_sketches(std::string_view json_text);
void save_sketches(const LayerSketches& sketches, std::size_t k, std::uint64_t master_seed,
                   const std::filesystem::path& path);
LayerSketches load_sketches(const std::filesystem::path& path);

} // namespace actsig

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "actsig/model_io.hpp"
#include "actsig/sampling.hpp"

namespace actsig {

// Bit-packed activation matrix: row j is neuron j's signature over the probe
// sample, bit s of a row is set iff the neuron fired on sample s. Rows are
// stored in 64-bit words, little-endian bit order, padding bits always zero.
class SignatureMatrix {
public:
    SignatureMatrix() = default;
    SignatureMatrix(std::size_t n_neurons, std::size_t n_samples);

    std::size_t n_neurons() const { return n_neurons_; }
    std::size_t n_samples() const { return n_samples_; }
    std::size_t words_per_row() const { return words_per_row_; }

    bool get(std::size_t neuron, std::size_t sample) const {
        return (row(neuron)[sample >> 6] >> (sample & 63)) & 1U;
    }
    void set(std::size_t neuron, std::size_t sample, bool value);

    std::span<const std::uint64_t> row(std::size_t neuron) const {
        return {bits_.data() + neuron * words_per_row_, words_per_row_};
    }
    std::span<std::uint64_t> row(std::size_t neuron) {
        return {bits_.data() + neuron * words_per_row_, words_per_row_};
    }

    std::size_t popcount(std::size_t neuron) const;
    // Ascending sample indices where the neuron fired.
    std::vector<std::uint32_t> active_indices(std::size_t neuron) const;

    bool operator==(const SignatureMatrix&) const = default;

private:
    std::size_t n_neurons_ = 0;
    std::size_t n_samples_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Bit (j, s) = [W_j . x_s + b_j > 0], strict inequality.
SignatureMatrix compute_signature_matrix(const Layer& layer, const Matrix& layer_input);
SignatureMatrix compute_signature_matrix(const Layer& layer, const SampleSet& samples);

// popcount / n_samples per neuron.
std::vector<double> activation_frequency(const SignatureMatrix& m);

struct NeuronFilterReport {
    std::vector<std::size_t> dead;
    std::vector<std::size_t> always_active;
    // Groups of two or more identical non-trivial rows, each ascending.
    std::vector<std::vector<std::size_t>> duplicate_groups;
    // One index per distinct non-trivial row (smallest member), ascending.
    std::vector<std::size_t> representatives;

    bool operator==(const NeuronFilterReport&) const = default;
};

NeuronFilterReport classify_neurons(const SignatureMatrix& m);

// Jaccard distance between two packed rows of equal length.
// Both empty -> 0; exactly one empty -> 1.
double jaccard_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

// IndexError for out-of-range neurons.
double exact_jaccard_distance(const SignatureMatrix& m, std::size_t j, std::size_t l);

// Binary "SASM" file: magic, u32 n_neurons, u64 n_samples, then the rows.
void save_signatures(const SignatureMatrix& m, const std::filesystem::path& path);
SignatureMatrix load_signatures(const std::filesystem::path& path);
std::string encode_signatures(const SignatureMatrix& m);
SignatureMatrix decode_signatures(std::string_view bytes);

} // namespace actsig

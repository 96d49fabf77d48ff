#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "actsig/matrix.hpp"

namespace actsig {

enum class Activation { relu, sigmoid, linear };

std::string_view to_string(Activation a);
// ParseError on anything outside the closed set.
Activation parse_activation(std::string_view name);
double apply_activation(Activation a, double z);

// One dense layer. Row j of `weights` is the incoming weight vector of neuron j,
// so weights(j, i) is the weight from input i to neuron j.
struct Layer {
    Matrix weights;
    std::vector<double> bias;
    Activation activation = Activation::relu;

    std::size_t width() const { return weights.rows(); }
    std::size_t input_width() const { return weights.cols(); }

    // Pre-activations W x + b for every row of `inputs` (B x input_width).
    Matrix pre_activations(const Matrix& inputs) const;
    Matrix apply(const Matrix& inputs) const;

    // ShapeError / ValueError when an invariant is broken.
    void validate() const;

    bool operator==(const Layer&) const = default;
};

struct Network {
    static constexpr int kFormatVersion = 1;

    std::vector<Layer> layers;
    int format_version = kFormatVersion;

    std::size_t input_width() const { return layers.front().input_width(); }
    std::size_t output_width() const { return layers.back().width(); }

    void validate() const;

    bool operator==(const Network&) const = default;
};

// Applies every layer in order. inputs is B x input_width.
Matrix forward(const Network& network, const Matrix& inputs);

// Input to layer `layer_index` (the activations of the layer before it, or the
// raw inputs for layer 0).
Matrix layer_inputs(const Network& network, std::size_t layer_index, const Matrix& inputs);

Network parse_network(std::string_view json_text);
std::string serialize_network(const Network& network);

Network load_network(const std::filesystem::path& path);
void save_network(const Network& network, const std::filesystem::path& path);

} // namespace actsig

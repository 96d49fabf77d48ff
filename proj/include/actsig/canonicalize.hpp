#pragma once

#include <utility>
#include <vector>

#include "actsig/model_io.hpp"

namespace actsig {

// Per-neuron positive scale c_j removed from a hidden layer. c_j == 1 exactly
// when the neuron's weight row was zero and left untouched.
struct ScaleFactors {
    std::vector<double> values;

    bool operator==(const ScaleFactors&) const = default;
};

// Rows with an L2 norm below this are treated as the zero vector.
inline constexpr double kZeroNormThreshold = 1e-300;

// Rescales every neuron to a unit-norm weight row (bias divided by the same
// norm). Zero rows pass through with c = 1.
std::pair<Layer, ScaleFactors> normalize_layer(const Layer& layer);

// Multiplies column j of the next layer's weights by c_j. Biases are untouched.
Layer compensate_next_layer(const Layer& next, const ScaleFactors& scales);

// Normalizes layers 0..L-2 in ascending order, pushing each layer's scales into
// its successor. The output layer only receives compensation. Hidden layers
// must be relu or linear (UnsupportedActivation otherwise).
std::pair<Network, std::vector<ScaleFactors>> canonicalize_network(const Network& network);

} // namespace actsig

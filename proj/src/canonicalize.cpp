#include "actsig/canonicalize.hpp"

#include <cmath>
#include <string>

#include "actsig/errors.hpp"

namespace actsig {

std::pair<Layer, ScaleFactors> normalize_layer(const Layer& layer) {
    layer.validate();
    Layer out = layer;
    ScaleFactors scales{std::vector<double>(layer.width(), 1.0)};
    for (std::size_t j = 0; j < layer.width(); ++j) {
        auto row = out.weights.row(j);
        double sq = 0.0;
        for (double w : row) {
            sq += w * w;
        }
        const double rho = std::sqrt(sq);
        if (rho < kZeroNormThreshold) {
            continue;
        }
        for (double& w : row) {
            w /= rho;
        }
        out.bias[j] /= rho;
        scales.values[j] = rho;
    }
    return {std::move(out), std::move(scales)};
}

Layer compensate_next_layer(const Layer& next, const ScaleFactors& scales) {
    if (next.input_width() != scales.values.size()) {
        throw ShapeError("next layer has " + std::to_string(next.input_width()) +
                         " inputs but " + std::to_string(scales.values.size()) +
                         " scale factors were given");
    }
    Layer out = next;
    for (std::size_t p = 0; p < out.width(); ++p) {
        auto row = out.weights.row(p);
        for (std::size_t j = 0; j < row.size(); ++j) {
            row[j] *= scales.values[j];
        }
    }
    return out;
}

std::pair<Network, std::vector<ScaleFactors>> canonicalize_network(const Network& network) {
    network.validate();
    Network out = network;
    std::vector<ScaleFactors> all_scales;
    const std::size_t n = out.layers.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Activation act = out.layers[k].activation;
        if (act != Activation::relu && act != Activation::linear) {
            throw UnsupportedActivation("hidden layer " + std::to_string(k) + " uses " +
                                        std::string(to_string(act)) +
                                        ", which is not positively homogeneous");
        }
        auto [normalized, scales] = normalize_layer(out.layers[k]);
        out.layers[k] = std::move(normalized);
        out.layers[k + 1] = compensate_next_layer(out.layers[k + 1], scales);
        all_scales.push_back(std::move(scales));
    }
    return {std::move(out), std::move(all_scales)};
}

} // namespace actsig

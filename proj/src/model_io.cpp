#include "actsig/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "actsig/errors.hpp"

namespace actsig {

using nlohmann::json;

std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::relu:
        return "relu";
    case Activation::sigmoid:
        return "sigmoid";
    case Activation::linear:
        return "linear";
    }
    return "?";
}

Activation parse_activation(std::string_view name) {
    if (name == "relu") {
        return Activation::relu;
    }
    if (name == "sigmoid") {
        return Activation::sigmoid;
    }
    if (name == "linear") {
        return Activation::linear;
    }
    throw ParseError("unknown activation '" + std::string(name) + "'");
}

double apply_activation(Activation a, double z) {
    switch (a) {
    case Activation::relu:
        return z > 0.0 ? z : 0.0;
    case Activation::sigmoid:
        return 1.0 / (1.0 + std::exp(-z));
    case Activation::linear:
        return z;
    }
    return z;
}

Matrix Layer::pre_activations(const Matrix& inputs) const {
    if (inputs.cols() != input_width()) {
        throw ShapeError("input width " + std::to_string(inputs.cols()) +
                         " does not match layer input width " + std::to_string(input_width()));
    }
    Matrix out(inputs.rows(), width());
    for (std::size_t b = 0; b < inputs.rows(); ++b) {
        const auto x = inputs.row(b);
        for (std::size_t j = 0; j < width(); ++j) {
            const auto w = weights.row(j);
            double z = bias[j];
            for (std::size_t i = 0; i < w.size(); ++i) {
                z += w[i] * x[i];
            }
            out(b, j) = z;
        }
    }
    return out;
}

Matrix Layer::apply(const Matrix& inputs) const {
    Matrix out = pre_activations(inputs);
    for (double& v : out.data()) {
        v = apply_activation(activation, v);
    }
    return out;
}

void Layer::validate() const {
    if (weights.rows() == 0 || weights.cols() == 0) {
        throw ShapeError("layer must have at least one neuron and one input");
    }
    if (weights.rows() != bias.size()) {
        throw ShapeError("weight rows (" + std::to_string(weights.rows()) +
                         ") do not match bias length (" + std::to_string(bias.size()) + ")");
    }
    for (double v : weights.data()) {
        if (!std::isfinite(v)) {
            throw ValueError("non-finite weight");
        }
    }
    for (double v : bias) {
        if (!std::isfinite(v)) {
            throw ValueError("non-finite bias");
        }
    }
}

void Network::validate() const {
    if (layers.empty()) {
        throw ShapeError("network has no layers");
    }
    for (std::size_t k = 0; k < layers.size(); ++k) {
        layers[k].validate();
        if (k > 0 && layers[k].input_width() != layers[k - 1].width()) {
            throw ShapeError("layer " + std::to_string(k) + " expects " +
                             std::to_string(layers[k].input_width()) + " inputs but layer " +
                             std::to_string(k - 1) + " has " + std::to_string(layers[k - 1].width()) +
                             " neurons");
        }
    }
}

Matrix forward(const Network& network, const Matrix& inputs) {
    return layer_inputs(network, network.layers.size(), inputs);
}

Matrix layer_inputs(const Network& network, std::size_t layer_index, const Matrix& inputs) {
    if (layer_index > network.layers.size()) {
        throw IndexError("layer index " + std::to_string(layer_index) + " out of range");
    }
    Matrix x = inputs;
    for (std::size_t k = 0; k < layer_index; ++k) {
        x = network.layers[k].apply(x);
    }
    return x;
}

namespace {

std::vector<double> parse_numbers(const json& j, const char* what) {
    if (!j.is_array()) {
        throw ParseError(std::string(what) + " must be an array");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) {
            throw ParseError(std::string(what) + " must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Layer parse_layer(const json& j) {
    if (!j.is_object() || !j.contains("weights") || !j.contains("bias") ||
        !j.contains("activation")) {
        throw ParseError("layer must be an object with weights, bias and activation");
    }
    const auto& w = j.at("weights");
    if (!w.is_array()) {
        throw ParseError("weights must be an array of rows");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(w.size());
    for (const auto& r : w) {
        rows.push_back(parse_numbers(r, "weight row"));
    }
    if (!j.at("activation").is_string()) {
        throw ParseError("activation must be a string");
    }
    Layer layer;
    layer.weights = Matrix::from_rows(rows);
    layer.bias = parse_numbers(j.at("bias"), "bias");
    layer.activation = parse_activation(j.at("activation").get<std::string>());
    return layer;
}

json layer_to_json(const Layer& layer) {
    json rows = json::array();
    for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
        const auto row = layer.weights.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {{"weights", std::move(rows)},
            {"bias", layer.bias},
            {"activation", std::string(to_string(layer.activation))}};
}

} // namespace

Network parse_network(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed network JSON: ") + e.what());
    } catch (const json::out_of_range& e) {
        // 406: a literal such as 1e999 overflows to infinity.
        if (e.id == 406) {
            throw ValueError(std::string("non-finite number in network JSON: ") + e.what());
        }
        throw ParseError(std::string("malformed network JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("layers") || !doc.at("layers").is_array()) {
        throw ParseError("network JSON must be an object with a 'layers' array");
    }
    Network net;
    if (doc.contains("format_version")) {
        if (!doc.at("format_version").is_number_integer()) {
            throw ParseError("format_version must be an integer");
        }
        net.format_version = doc.at("format_version").get<int>();
        if (net.format_version != Network::kFormatVersion) {
            throw ParseError("unsupported format_version " + std::to_string(net.format_version));
        }
    }
    for (const auto& l : doc.at("layers")) {
        net.layers.push_back(parse_layer(l));
    }
    net.validate();
    return net;
}

std::string serialize_network(const Network& network) {
    json layers = json::array();
    for (const auto& l : network.layers) {
        layers.push_back(layer_to_json(l));
    }
    json doc = {{"format_version", network.format_version}, {"layers", std::move(layers)}};
    return doc.dump() + "\n";
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

void save_network(const Network& network, const std::filesystem::path& path) {
    network.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << serialize_network(network);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace actsig

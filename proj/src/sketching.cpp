#include "actsig/sketching.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "actsig/parallel.hpp"
#include "actsig/rng.hpp"

namespace actsig {

using nlohmann::json;

HashFamily build_hash_family(std::size_t k, std::uint64_t master_seed) {
    if (k == 0) {
        throw DomainError("hash family needs k >= 1");
    }
    HashFamily family{k, master_seed, {}};
    family.params.reserve(k);
    SplitMix64 rng(master_seed);
    for (std::size_t t = 0; t < k; ++t) {
        const std::uint64_t a = 1 + rng.below(kMersenne61 - 1);
        const std::uint64_t b = rng.below(kMersenne61);
        family.params.push_back({a, b});
    }
    return family;
}

std::size_t required_hashes(double alpha, double delta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(delta > 0.0 && delta <= 1.0)) {
        throw DomainError("required_hashes needs alpha in (0,1) and delta in (0,1]");
    }
    return static_cast<std::size_t>(std::ceil(2.0 * std::log(2.0 / alpha) / (delta * delta)));
}

bool below_resolution(double delta, std::size_t n_samples) {
    return n_samples > 0 && delta < 1.0 / static_cast<double>(n_samples);
}

MinHashSketch sketch(std::span<const std::uint32_t> active, const HashFamily& family) {
    return sketch_with(
        active, family.k, [&](std::size_t t, std::uint64_t s) { return family.hash(t, s); },
        family.master_seed);
}

double estimate_distance(const MinHashSketch& a, const MinHashSketch& b) {
    if (a.k != b.k || a.master_seed != b.master_seed || a.values.size() != b.values.size()) {
        throw FamilyMismatch("sketches were built with different hash families");
    }
    if (a.k == 0) {
        throw FamilyMismatch("empty sketches");
    }
    std::size_t differ = 0;
    for (std::size_t t = 0; t < a.values.size(); ++t) {
        differ += a.values[t] != b.values[t] ? 1 : 0;
    }
    return static_cast<double>(differ) / static_cast<double>(a.k);
}

LayerSketches sketch_layer(const SignatureMatrix& m, const NeuronFilterReport& report,
                           const HashFamily& family) {
    std::vector<MinHashSketch> out(report.representatives.size());
    parallel_for(report.representatives.size(), [&](std::size_t i) {
        const std::size_t j = report.representatives[i];
        if (j >= m.n_neurons()) {
            throw IndexError("filter report refers to neuron " + std::to_string(j) +
                             " outside the signature matrix");
        }
        const auto active = m.active_indices(j);
        out[i] = sketch(active, family);
    });
    LayerSketches sketches;
    for (std::size_t i = 0; i < out.size(); ++i) {
        sketches.emplace(report.representatives[i], std::move(out[i]));
    }
    return sketches;
}

std::string serialize_sketches(const LayerSketches& sketches, std::size_t k,
                               std::uint64_t master_seed) {
    json body = json::object();
    for (const auto& [idx, s] : sketches) {
        body[std::to_string(idx)] = s.values;
    }
    json doc = {{"k", k}, {"master_seed", master_seed}, {"sketches", std::move(body)}};
    return doc.dump() + "\n";
}

LayerSketches parse_sketches(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed sketch JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("k") || !doc.contains("master_seed") ||
        !doc.contains("sketches") || !doc.at("sketches").is_object() ||
        !doc.at("k").is_number_unsigned() || !doc.at("master_seed").is_number_unsigned()) {
        throw ParseError("sketch JSON must have k, master_seed and a sketches object");
    }
    const auto k = doc.at("k").get<std::size_t>();
    const auto seed = doc.at("master_seed").get<std::uint64_t>();
    LayerSketches out;
    for (const auto& [key, values] : doc.at("sketches").items()) {
        std::size_t idx = 0;
        try {
            std::size_t used = 0;
            idx = std::stoull(key, &used);
            if (used != key.size()) {
                throw std::invalid_argument(key);
            }
        } catch (const std::exception&) {
            throw ParseError("sketch key '" + key + "' is not a neuron index");
        }
        if (!values.is_array() || values.size() != k) {
            throw ParseError("sketch " + key + " must hold exactly k values");
        }
        MinHashSketch s{{}, k, seed};
        s.values.reserve(k);
        for (const auto& v : values) {
            if (!v.is_number_unsigned()) {
                throw ParseError("sketch values must be unsigned integers");
            }
            s.values.push_back(v.get<std::uint64_t>());
        }
        out.emplace(idx, std::move(s));
    }
    return out;
}

void save_sketches(const LayerSketches& sketches, std::size_t k, std::uint64_t master_seed,
                   const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << serialize_sketches(sketches, k, master_seed);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

LayerSketches load_sketches(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sketches(buf.str());
}

} // namespace actsig

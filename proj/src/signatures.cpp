#include "actsig/signatures.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <sstream>

#include "actsig/errors.hpp"
#include "actsig/parallel.hpp"

namespace actsig {

SignatureMatrix::SignatureMatrix(std::size_t n_neurons, std::size_t n_samples)
    : n_neurons_(n_neurons),
      n_samples_(n_samples),
      words_per_row_((n_samples + 63) / 64),
      bits_(n_neurons * words_per_row_, 0) {}

void SignatureMatrix::set(std::size_t neuron, std::size_t sample, bool value) {
    std::uint64_t& word = row(neuron)[sample >> 6];
    const std::uint64_t mask = std::uint64_t{1} << (sample & 63);
    word = value ? (word | mask) : (word & ~mask);
}

std::size_t SignatureMatrix::popcount(std::size_t neuron) const {
    std::size_t count = 0;
    for (std::uint64_t w : row(neuron)) {
        count += static_cast<std::size_t>(std::popcount(w));
    }
    return count;
}

std::vector<std::uint32_t> SignatureMatrix::active_indices(std::size_t neuron) const {
    std::vector<std::uint32_t> out;
    out.reserve(popcount(neuron));
    const auto r = row(neuron);
    for (std::size_t w = 0; w < r.size(); ++w) {
        std::uint64_t word = r[w];
        while (word != 0) {
            const int bit = std::countr_zero(word);
            out.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(bit)));
            word &= word - 1;
        }
    }
    return out;
}

SignatureMatrix compute_signature_matrix(const Layer& layer, const Matrix& layer_input) {
    if (layer_input.cols() != layer.input_width()) {
        throw ShapeError("sample dimension " + std::to_string(layer_input.cols()) +
                         " does not match layer input width " + std::to_string(layer.input_width()));
    }
    const std::size_t n = layer_input.rows();
    SignatureMatrix m(layer.width(), n);
    parallel_for(layer.width(), [&](std::size_t j) {
        const auto w = layer.weights.row(j);
        auto out = m.row(j);
        for (std::size_t s = 0; s < n; ++s) {
            const auto x = layer_input.row(s);
            double z = layer.bias[j];
            for (std::size_t i = 0; i < w.size(); ++i) {
                z += w[i] * x[i];
            }
            if (z > 0.0) {
                out[s >> 6] |= std::uint64_t{1} << (s & 63);
            }
        }
    });
    return m;
}

SignatureMatrix compute_signature_matrix(const Layer& layer, const SampleSet& samples) {
    return compute_signature_matrix(layer, samples.points);
}

std::vector<double> activation_frequency(const SignatureMatrix& m) {
    std::vector<double> out(m.n_neurons(), 0.0);
    if (m.n_samples() == 0) {
        return out;
    }
    for (std::size_t j = 0; j < m.n_neurons(); ++j) {
        out[j] = static_cast<double>(m.popcount(j)) / static_cast<double>(m.n_samples());
    }
    return out;
}

NeuronFilterReport classify_neurons(const SignatureMatrix& m) {
    NeuronFilterReport report;
    // Keyed on the packed row; neurons are visited in ascending order so each
    // group's first member is its smallest index.
    std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> groups;
    std::vector<const std::vector<std::size_t>*> order;
    for (std::size_t j = 0; j < m.n_neurons(); ++j) {
        const std::size_t pc = m.popcount(j);
        if (pc == 0) {
            report.dead.push_back(j);
        } else if (pc == m.n_samples()) {
            report.always_active.push_back(j);
        } else {
            const auto r = m.row(j);
            auto [it, inserted] = groups.try_emplace(std::vector<std::uint64_t>(r.begin(), r.end()));
            it->second.push_back(j);
            if (inserted) {
                order.push_back(&it->second);
            }
        }
    }
    for (const auto* members : order) {
        report.representatives.push_back(members->front());
        if (members->size() > 1) {
            report.duplicate_groups.push_back(*members);
        }
    }
    return report;
}

double jaccard_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    if (a.size() != b.size()) {
        throw ShapeError("signature rows have different lengths");
    }
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t w = 0; w < a.size(); ++w) {
        inter += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
        uni += static_cast<std::size_t>(std::popcount(a[w] | b[w]));
    }
    if (uni == 0) {
        return 0.0;
    }
    return static_cast<double>(uni - inter) / static_cast<double>(uni);
}

double exact_jaccard_distance(const SignatureMatrix& m, std::size_t j, std::size_t l) {
    if (j >= m.n_neurons() || l >= m.n_neurons()) {
        throw IndexError("neuron index out of range");
    }
    return jaccard_distance(m.row(j), m.row(l));
}

namespace {

constexpr char kMagic[4] = {'S', 'A', 'S', 'M'};

template <class T>
void put_le(std::string& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
    }
}

template <class T>
T get_le(std::string_view bytes, std::size_t& offset) {
    if (offset + sizeof(T) > bytes.size()) {
        throw ParseError("truncated signature file");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    }
    offset += sizeof(T);
    return static_cast<T>(v);
}

} // namespace

std::string encode_signatures(const SignatureMatrix& m) {
    std::string out(kMagic, sizeof(kMagic));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.n_neurons()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.n_samples()));
    out.reserve(out.size() + m.n_neurons() * m.words_per_row() * 8);
    for (std::size_t j = 0; j < m.n_neurons(); ++j) {
        for (std::uint64_t w : m.row(j)) {
            put_le<std::uint64_t>(out, w);
        }
    }
    return out;
}

SignatureMatrix decode_signatures(std::string_view bytes) {
    if (bytes.size() < 4 || bytes.substr(0, 4) != std::string_view(kMagic, 4)) {
        throw ParseError("missing SASM magic");
    }
    std::size_t offset = 4;
    const auto n_neurons = get_le<std::uint32_t>(bytes, offset);
    const auto n_samples = get_le<std::uint64_t>(bytes, offset);
    const std::uint64_t words = (n_samples + 63) / 64;
    if (bytes.size() - offset != static_cast<std::uint64_t>(n_neurons) * words * 8) {
        throw ParseError("signature file size does not match its header");
    }
    SignatureMatrix m(n_neurons, n_samples);
    const std::uint64_t pad_mask =
        (n_samples % 64 == 0) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (n_samples % 64)) - 1);
    for (std::size_t j = 0; j < n_neurons; ++j) {
        auto r = m.row(j);
        for (std::size_t w = 0; w < r.size(); ++w) {
            r[w] = get_le<std::uint64_t>(bytes, offset);
        }
        if (!r.empty() && (r.back() & ~pad_mask) != 0) {
            throw ParseError("non-zero padding bits in row " + std::to_string(j));
        }
    }
    return m;
}

void save_signatures(const SignatureMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    const std::string bytes = encode_signatures(m);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

SignatureMatrix load_signatures(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_signatures(buf.str());
}

} // namespace actsig

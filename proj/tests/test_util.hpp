#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "actsig/matrix.hpp"
#include "actsig/model_io.hpp"
#include "actsig/signatures.hpp"

namespace actsig::test {

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("actsig_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                            double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Matrix m(rows, cols);
    for (double& v : m.data()) {
        v = dist(rng);
    }
    return m;
}

inline Layer random_layer(std::mt19937_64& rng, std::size_t width, std::size_t in,
                          Activation act, double scale = 1.0) {
    Layer l;
    l.weights = random_matrix(rng, width, in, -scale, scale);
    std::uniform_real_distribution<double> dist(-scale, scale);
    l.bias.resize(width);
    for (double& b : l.bias) {
        b = dist(rng);
    }
    l.activation = act;
    return l;
}

// widths = {input, hidden..., output}; hidden layers relu, output sigmoid.
inline Network random_network(std::mt19937_64& rng, const std::vector<std::size_t>& widths,
                              double scale = 1.0) {
    Network n;
    for (std::size_t k = 1; k < widths.size(); ++k) {
        const bool last = k + 1 == widths.size();
        n.layers.push_back(random_layer(rng, widths[k], widths[k - 1],
                                        last ? Activation::sigmoid : Activation::relu, scale));
    }
    return n;
}

// Permutes the neurons of hidden layer k (rows of k, columns of k+1).
inline Network permute_neurons(const Network& net, std::size_t k,
                               const std::vector<std::size_t>& perm) {
    Network out = net;
    const Layer& src = net.layers[k];
    for (std::size_t j = 0; j < perm.size(); ++j) {
        for (std::size_t i = 0; i < src.input_width(); ++i) {
            out.layers[k].weights(j, i) = src.weights(perm[j], i);
        }
        out.layers[k].bias[j] = src.bias[perm[j]];
    }
    if (k + 1 < net.layers.size()) {
        const Layer& next = net.layers[k + 1];
        for (std::size_t p = 0; p < next.width(); ++p) {
            for (std::size_t j = 0; j < perm.size(); ++j) {
                out.layers[k + 1].weights(p, j) = next.weights(p, perm[j]);
            }
        }
    }
    return out;
}

using BoolRows = std::vector<std::vector<bool>>;

inline SignatureMatrix pack(const BoolRows& rows) {
    SignatureMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        for (std::size_t s = 0; s < rows[j].size(); ++s) {
            m.set(j, s, rows[j][s]);
        }
    }
    return m;
}

// Element-by-element Jaccard distance on plain bool vectors.
inline double naive_jaccard_distance(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        inter += (a[s] && b[s]) ? 1 : 0;
        uni += (a[s] || b[s]) ? 1 : 0;
    }
    return uni == 0 ? 0.0 : static_cast<double>(uni - inter) / static_cast<double>(uni);
}

namespace detail {

inline void enumerate(const Matrix& c, std::size_t row, std::vector<bool>& used,
                      std::vector<std::size_t>& choice, double& best) {
    const bool rows_lead = c.rows() <= c.cols();
    const std::size_t lead = rows_lead ? c.rows() : c.cols();
    const std::size_t other = rows_lead ? c.cols() : c.rows();
    if (row == lead) {
        // Sum in ascending original-row order, like the solver.
        double total = 0.0;
        if (rows_lead) {
            for (std::size_t r = 0; r < c.rows(); ++r) {
                total += c(r, choice[r]);
            }
        } else {
            std::vector<std::size_t> col_of_row(c.rows(), c.cols());
            for (std::size_t col = 0; col < c.cols(); ++col) {
                col_of_row[choice[col]] = col;
            }
            for (std::size_t r = 0; r < c.rows(); ++r) {
                if (col_of_row[r] != c.cols()) {
                    total += c(r, col_of_row[r]);
                }
            }
        }
        best = std::min(best, total);
        return;
    }
    for (std::size_t o = 0; o < other; ++o) {
        if (used[o]) {
            continue;
        }
        used[o] = true;
        choice[row] = o;
        enumerate(c, row + 1, used, choice, best);
        used[o] = false;
    }
}

} // namespace detail

// Minimum total cost over every injective assignment of the smaller side.
inline double brute_force_assignment(const Matrix& c) {
    const std::size_t lead = std::min(c.rows(), c.cols());
    const std::size_t other = std::max(c.rows(), c.cols());
    std::vector<bool> used(other, false);
    std::vector<std::size_t> choice(lead, 0);
    double best = std::numeric_limits<double>::infinity();
    detail::enumerate(c, 0, used, choice, best);
    return best;
}

} // namespace actsig::test

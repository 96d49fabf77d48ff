#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "actsig/matrix.hpp"
#include "actsig/model_io.hpp"
#include "actsig/sampling.hpp"
#include "actsig/signatures.hpp"
#include "actsig/sketching.hpp"

namespace actsig {

// Pairwise distances between representatives of two layers. costs(u, v)
// belongs to neurons row_ids[u] and col_ids[v].
struct CostMatrix {
    Matrix costs;
    std::vector<std::size_t> row_ids;
    std::vector<std::size_t> col_ids;
};

struct MatchedPair {
    std::size_t row_id = 0;
    std::size_t col_id = 0;
    double cost = 0.0;

    bool operator==(const MatchedPair&) const = default;
};

// Pairs are ordered by row position in the cost matrix; total_cost is summed
// in that order.
struct Matching {
    std::vector<MatchedPair> pairs;
    double total_cost = 0.0;
};

// costs(u, v) = estimate_distance(a[u], b[v]) with ids in ascending key order.
CostMatrix build_cost_matrix(const LayerSketches& a, const LayerSketches& b);

// Minimum-cost assignment of min(rows, cols) pairs (Kuhn-Munkres with
// potentials, no padding). Deterministic for a fixed matrix. EmptyMatrix if
// either side is empty, ValueError for non-finite costs.
Matching solve_assignment(const CostMatrix& c);

// Mean pair cost. EmptyMatching if there are no pairs.
double layer_distance(const Matching& matching);

struct FilterSummary {
    std::size_t n_neurons = 0;
    NeuronFilterReport report;
};

struct ValidationSummary {
    double mae = 0.0;
    double rmse = 0.0;
    double exact_layer_distance = 0.0;
    double agreement = 0.0;
    Matching exact_matching;
    CostMatrix exact_costs;
};

struct ComparisonParams {
    std::size_t layer = 0;
    std::size_t n_samples = 0;
    std::size_t k = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t sample_seed = 0;
    SamplingStrategy sample_strategy = SamplingStrategy::external;
};

struct LayerComparisonReport {
    double layer_distance = 0.0;
    Matching matching;
    CostMatrix costs;
    std::vector<std::size_t> unmatched_a;
    std::vector<std::size_t> unmatched_b;
    FilterSummary filter_a;
    FilterSummary filter_b;
    ComparisonParams params;
    std::optional<ValidationSummary> validation;
};

struct CompareOptions {
    // Also run the exact-Jaccard path and fill in `validation`.
    bool exact = false;
};

// Canonicalize both networks, build signatures of layer `layer_index` over the
// samples (propagated through the preceding layers), filter, sketch, match.
LayerComparisonReport compare_layers(const Network& net_a, const Network& net_b,
                                     std::size_t layer_index, const SampleSet& samples,
                                     const HashFamily& family, const CompareOptions& options = {});

std::string serialize_report(const LayerComparisonReport& report);

} // namespace actsig

#include "actsig/matching.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "actsig/canonicalize.hpp"
#include "actsig/errors.hpp"
#include "actsig/parallel.hpp"
#include "actsig/validation.hpp"

namespace actsig {

CostMatrix build_cost_matrix(const LayerSketches& a, const LayerSketches& b) {
    CostMatrix c;
    std::vector<const MinHashSketch*> sa;
    std::vector<const MinHashSketch*> sb;
    for (const auto& [id, s] : a) {
        c.row_ids.push_back(id);
        sa.push_back(&s);
    }
    for (const auto& [id, s] : b) {
        c.col_ids.push_back(id);
        sb.push_back(&s);
    }
    c.costs = Matrix(sa.size(), sb.size());
    parallel_for(sa.size(), [&](std::size_t u) {
        for (std::size_t v = 0; v < sb.size(); ++v) {
            c.costs(u, v) = estimate_distance(*sa[u], *sb[v]);
        }
    });
    return c;
}

namespace {

// Kuhn-Munkres with row/column potentials for rows <= cols. Returns, for each
// row, the assigned column.
std::vector<std::size_t> hungarian(const Matrix& a) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0);    // p[j]: row (1-based) owning column j
    std::vector<std::size_t> way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> assignment(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) {
            assignment[p[j] - 1] = j - 1;
        }
    }
    return assignment;
}

} // namespace

Matching solve_assignment(const CostMatrix& c) {
    const Matrix& costs = c.costs;
    if (costs.rows() == 0 || costs.cols() == 0) {
        throw EmptyMatrix("cannot solve an assignment on an empty cost matrix");
    }
    for (double x : costs.data()) {
        if (!std::isfinite(x)) {
            throw ValueError("cost matrix contains a non-finite entry");
        }
    }
    const bool transpose = costs.rows() > costs.cols();
    const Matrix work = transpose ? costs.transposed() : costs;
    const auto assignment = hungarian(work);

    // Re-express as (row, col) of the original matrix, ordered by row.
    std::vector<std::size_t> col_of_row(costs.rows(), costs.cols());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (transpose) {
            col_of_row[assignment[i]] = i;
        } else {
            col_of_row[i] = assignment[i];
        }
    }
    Matching out;
    for (std::size_t r = 0; r < costs.rows(); ++r) {
        const std::size_t col = col_of_row[r];
        if (col == costs.cols()) {
            continue;
        }
        const std::size_t row_id = r < c.row_ids.size() ? c.row_ids[r] : r;
        const std::size_t col_id = col < c.col_ids.size() ? c.col_ids[col] : col;
        out.pairs.push_back({row_id, col_id, costs(r, col)});
        out.total_cost += costs(r, col);
    }
    return out;
}

double layer_distance(const Matching& matching) {
    if (matching.pairs.empty()) {
        throw EmptyMatching("layer distance of an empty matching is undefined");
    }
    return matching.total_cost / static_cast<double>(matching.pairs.size());
}

namespace {

SignatureMatrix layer_signatures(const Network& canonical, std::size_t layer_index,
                                 const SampleSet& samples) {
    const Matrix inputs = layer_inputs(canonical, layer_index, samples.points);
    return compute_signature_matrix(canonical.layers[layer_index], inputs);
}

std::vector<std::size_t> unmatched(const std::vector<std::size_t>& ids, const Matching& m,
                                   bool rows) {
    std::vector<std::size_t> out;
    for (std::size_t id : ids) {
        bool found = false;
        for (const auto& p : m.pairs) {
            if ((rows ? p.row_id : p.col_id) == id) {
                found = true;
                break;
            }
        }
        if (!found) {
            out.push_back(id);
        }
    }
    return out;
}

} // namespace

LayerComparisonReport compare_layers(const Network& net_a, const Network& net_b,
                                     std::size_t layer_index, const SampleSet& samples,
                                     const HashFamily& family, const CompareOptions& options) {
    net_a.validate();
    net_b.validate();
    if (layer_index >= net_a.layers.size() || layer_index >= net_b.layers.size()) {
        throw IndexError("layer " + std::to_string(layer_index) + " does not exist in both networks");
    }
    if (net_a.input_width() != net_b.input_width()) {
        throw ShapeError("networks have different input widths");
    }
    if (samples.dimension() != net_a.input_width()) {
        throw ShapeError("sample dimension " + std::to_string(samples.dimension()) +
                         " does not match network input width " + std::to_string(net_a.input_width()));
    }
    const Network canon_a = canonicalize_network(net_a).first;
    const Network canon_b = canonicalize_network(net_b).first;

    const SignatureMatrix m_a = layer_signatures(canon_a, layer_index, samples);
    const SignatureMatrix m_b = layer_signatures(canon_b, layer_index, samples);

    LayerComparisonReport report;
    report.filter_a = {m_a.n_neurons(), classify_neurons(m_a)};
    report.filter_b = {m_b.n_neurons(), classify_neurons(m_b)};
    report.params = {layer_index, samples.size(), family.k, family.master_seed, samples.seed,
                     samples.strategy};

    const LayerSketches sk_a = sketch_layer(m_a, report.filter_a.report, family);
    const LayerSketches sk_b = sketch_layer(m_b, report.filter_b.report, family);
    report.costs = build_cost_matrix(sk_a, sk_b);
    report.matching = solve_assignment(report.costs);
    report.layer_distance = layer_distance(report.matching);
    report.unmatched_a = unmatched(report.costs.row_ids, report.matching, true);
    report.unmatched_b = unmatched(report.costs.col_ids, report.matching, false);

    if (options.exact) {
        ValidationSummary v;
        v.exact_costs = exact_cost_matrix(m_a, m_b, report.filter_a.report.representatives,
                                          report.filter_b.report.representatives);
        v.exact_matching = solve_assignment(v.exact_costs);
        v.exact_layer_distance = layer_distance(v.exact_matching);
        const auto err = approximation_errors(v.exact_costs, report.costs);
        v.mae = err.mae;
        v.rmse = err.rmse;
        v.agreement = matching_agreement(report.matching, v.exact_matching);
        report.validation = std::move(v);
    }
    return report;
}

namespace {

using nlohmann::json;

json pairs_json(const Matching& m) {
    json pairs = json::array();
    for (const auto& p : m.pairs) {
        pairs.push_back({{"a", p.row_id}, {"b", p.col_id}, {"cost", p.cost}});
    }
    return pairs;
}

json filter_json(const FilterSummary& f) {
    return {{"n_neurons", f.n_neurons},
            {"dead", f.report.dead},
            {"always_active", f.report.always_active},
            {"duplicate_groups", f.report.duplicate_groups},
            {"representatives", f.report.representatives},
            {"n_unique", f.report.representatives.size()}};
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

} // namespace

std::string serialize_report(const LayerComparisonReport& report) {
    json doc;
    doc["layer_distance"] = report.layer_distance;
    doc["pairs"] = pairs_json(report.matching);
    doc["unmatched_a"] = report.unmatched_a;
    doc["unmatched_b"] = report.unmatched_b;
    doc["filters"] = {{"a", filter_json(report.filter_a)}, {"b", filter_json(report.filter_b)}};
    doc["params"] = {{"layer", report.params.layer},
                     {"n_samples", report.params.n_samples},
                     {"k", report.params.k},
                     {"master_seed", report.params.master_seed},
                     {"sample_seed", report.params.sample_seed},
                     {"sample_strategy", std::string(to_string(report.params.sample_strategy))}};
    doc["costs"] = {{"row_ids", report.costs.row_ids},
                    {"col_ids", report.costs.col_ids},
                    {"minhash", matrix_json(report.costs.costs)}};
    if (report.validation) {
        const auto& v = *report.validation;
        doc["validation"] = {{"mae", v.mae},
                             {"rmse", v.rmse},
                             {"exact_layer_distance", v.exact_layer_distance},
                             {"agreement", v.agreement},
                             {"exact_pairs", pairs_json(v.exact_matching)}};
        doc["costs"]["exact"] = matrix_json(v.exact_costs.costs);
    }
    return doc.dump(2) + "\n";
}

} // namespace actsig

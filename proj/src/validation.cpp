#include "actsig/validation.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "actsig/errors.hpp"

namespace actsig {

CostMatrix exact_cost_matrix(const SignatureMatrix& m_a, const SignatureMatrix& m_b,
                             std::span<const std::size_t> reps_a,
                             std::span<const std::size_t> reps_b) {
    if (m_a.n_samples() != m_b.n_samples()) {
        throw ShapeError("signature matrices cover different sample counts");
    }
    CostMatrix c;
    c.row_ids.assign(reps_a.begin(), reps_a.end());
    c.col_ids.assign(reps_b.begin(), reps_b.end());
    c.costs = Matrix(reps_a.size(), reps_b.size());
    for (std::size_t u = 0; u < reps_a.size(); ++u) {
        if (reps_a[u] >= m_a.n_neurons()) {
            throw IndexError("representative out of range");
        }
        for (std::size_t v = 0; v < reps_b.size(); ++v) {
            if (reps_b[v] >= m_b.n_neurons()) {
                throw IndexError("representative out of range");
            }
            c.costs(u, v) = jaccard_distance(m_a.row(reps_a[u]), m_b.row(reps_b[v]));
        }
    }
    return c;
}

ApproximationErrors approximation_errors(const CostMatrix& exact, const CostMatrix& approx) {
    if (exact.costs.rows() != approx.costs.rows() || exact.costs.cols() != approx.costs.cols()) {
        throw ShapeError("cost matrices differ in shape");
    }
    const auto e = exact.costs.data();
    const auto a = approx.costs.data();
    if (e.empty()) {
        return {};
    }
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double d = a[i] - e[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
    }
    const auto n = static_cast<double>(e.size());
    return {abs_sum / n, std::sqrt(sq_sum / n)};
}

double matching_agreement(const Matching& m1, const Matching& m2) {
    const std::size_t denom = std::max(m1.pairs.size(), m2.pairs.size());
    if (denom == 0) {
        return 1.0;
    }
    std::set<std::pair<std::size_t, std::size_t>> first;
    for (const auto& p : m1.pairs) {
        first.emplace(p.row_id, p.col_id);
    }
    std::size_t common = 0;
    for (const auto& p : m2.pairs) {
        common += first.count({p.row_id, p.col_id});
    }
    return static_cast<double>(common) / static_cast<double>(denom);
}

} // namespace actsig

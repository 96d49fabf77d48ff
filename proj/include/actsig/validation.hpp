#pragma once

#include <span>
#include <vector>

#include "actsig/matching.hpp"
#include "actsig/signatures.hpp"

namespace actsig {

// Exact Jaccard distances between reps_a rows of m_a and reps_b rows of m_b.
// ShapeError when the two matrices cover different sample counts.
CostMatrix exact_cost_matrix(const SignatureMatrix& m_a, const SignatureMatrix& m_b,
                             std::span<const std::size_t> reps_a,
                             std::span<const std::size_t> reps_b);

struct ApproximationErrors {
    double mae = 0.0;
    double rmse = 0.0;
};

// Over every cell of the two matrices.
ApproximationErrors approximation_errors(const CostMatrix& exact, const CostMatrix& approx);

// Share of (row_id, col_id) pairs present in both matchings.
double matching_agreement(const Matching& m1, const Matching& m2);

} // namespace actsig

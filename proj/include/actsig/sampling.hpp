#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "actsig/matrix.hpp"

namespace actsig {

struct Interval {
    double low = 0.0;
    double high = 1.0;

    bool operator==(const Interval&) const = default;
};

enum class SamplingStrategy { uniform, lhs, external };

std::string_view to_string(SamplingStrategy s);

// The probe sample: one point per row.
struct SampleSet {
    Matrix points;
    std::vector<Interval> bounds;
    std::uint64_t seed = 0;
    SamplingStrategy strategy = SamplingStrategy::external;

    std::size_t size() const { return points.rows(); }
    std::size_t dimension() const { return points.cols(); }
};

// Inputs to the VC-dimension sample size bound for one layer.
struct VcQuery {
    std::uint64_t d_in = 1;
    std::uint64_t n_neurons = 1;
    double epsilon = 0.05;
    double delta = 0.01;
};

// Right-hand side of the multiple-hypothesis VC bound, natural logs:
//   (1/eps^2) * ((d+1) ln(2 e N / (d+1)) + ln(2 n_neurons / delta))
double vc_bound_rhs(const VcQuery& q, double n_samples);

// Smallest N >= rhs(N) at the bound's fixed point. Iterates N <- ceil(rhs(N))
// from (d+1)/eps^2 until successive values differ by at most one, then steps
// to the exact crossing. DomainError for invalid queries, NonConvergence after
// 10'000 iterations.
std::uint64_t solve_min_samples(const VcQuery& q);

// "a:b,c:d" -> {{a,b},{c,d}}. ParseError on malformed text.
std::vector<Interval> parse_bounds(std::string_view text);

// n i.i.d. uniform points in the box. Dimension d draws from its own
// splitmix stream (seed, d). BoundsError if any low >= high or n == 0.
SampleSet generate_uniform(std::size_t n, const std::vector<Interval>& bounds, std::uint64_t seed);

// Latin hypercube: in each dimension the n points cover the n equal strata of
// the unit interval exactly once, with uniform jitter inside each stratum,
// then get scaled to the bounds.
SampleSet generate_lhs(std::size_t n, const std::vector<Interval>& bounds, std::uint64_t seed);

// CSV, one point per row. Bounds become the per-column min/max.
SampleSet load_samples(const std::filesystem::path& path);
SampleSet parse_samples(std::string_view csv_text);
void save_samples(const SampleSet& samples, const std::filesystem::path& path);
std::string format_samples(const SampleSet& samples);

} // namespace actsig

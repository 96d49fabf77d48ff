#include "actsig/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "actsig/errors.hpp"
#include "actsig/rng.hpp"

namespace actsig {

std::string_view to_string(SamplingStrategy s) {
    switch (s) {
    case SamplingStrategy::uniform:
        return "uniform";
    case SamplingStrategy::lhs:
        return "lhs";
    case SamplingStrategy::external:
        return "external";
    }
    return "?";
}

namespace {

void check_query(const VcQuery& q) {
    if (q.d_in == 0 || q.n_neurons == 0) {
        throw DomainError("d_in and n_neurons must be positive");
    }
    if (!(q.epsilon > 0.0 && q.epsilon < 1.0) || !(q.delta > 0.0 && q.delta < 1.0)) {
        throw DomainError("epsilon and delta must lie strictly inside (0, 1)");
    }
}

bool satisfies(const VcQuery& q, std::uint64_t n) {
    return static_cast<double>(n) >= vc_bound_rhs(q, static_cast<double>(n));
}

void check_box(std::size_t n, const std::vector<Interval>& bounds) {
    if (n == 0) {
        throw BoundsError("sample size must be at least 1");
    }
    if (bounds.empty()) {
        throw BoundsError("at least one dimension is required");
    }
    for (const auto& b : bounds) {
        if (!std::isfinite(b.low) || !std::isfinite(b.high) || !(b.low < b.high)) {
            throw BoundsError("each dimension needs finite low < high");
        }
    }
}

double parse_double(std::string_view text) {
    double v = 0.0;
    // from_chars does not accept a leading '+'.
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError("not a finite number: '" + std::string(text) + "'");
    }
    return v;
}

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

} // namespace

double vc_bound_rhs(const VcQuery& q, double n_samples) {
    const double d1 = static_cast<double>(q.d_in) + 1.0;
    const double vc_term = d1 * std::log(2.0 * std::numbers::e * n_samples / d1);
    const double union_term = std::log(2.0 * static_cast<double>(q.n_neurons) / q.delta);
    return (vc_term + union_term) / (q.epsilon * q.epsilon);
}

std::uint64_t solve_min_samples(const VcQuery& q) {
    check_query(q);
    constexpr int kMaxIterations = 10'000;
    double n = (static_cast<double>(q.d_in) + 1.0) / (q.epsilon * q.epsilon);
    bool converged = false;
    for (int it = 0; it < kMaxIterations; ++it) {
        const double next = std::ceil(vc_bound_rhs(q, std::max(n, 1.0)));
        if (!std::isfinite(next)) {
            throw NonConvergence("VC bound iteration diverged");
        }
        if (std::abs(next - n) <= 1.0) {
            n = next;
            converged = true;
            break;
        }
        n = next;
    }
    if (!converged) {
        throw NonConvergence("VC bound iteration did not settle within 10000 steps");
    }
    auto result = static_cast<std::uint64_t>(std::max(n, 1.0));
    // The iterate can land one below the crossing; walk to it exactly.
    while (!satisfies(q, result)) {
        ++result;
    }
    while (result > 1 && satisfies(q, result - 1)) {
        --result;
    }
    return result;
}

std::vector<Interval> parse_bounds(std::string_view text) {
    std::vector<Interval> out;
    for (auto part : split(text, ',')) {
        part = trim(part);
        // Split on the ':' that separates low from high; a leading '-' is part
        // of the number.
        const auto colon = part.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError("bounds entry '" + std::string(part) + "' is not low:high");
        }
        out.push_back({parse_double(trim(part.substr(0, colon))),
                       parse_double(trim(part.substr(colon + 1)))});
    }
    return out;
}

SampleSet generate_uniform(std::size_t n, const std::vector<Interval>& bounds, std::uint64_t seed) {
    check_box(n, bounds);
    SampleSet s{Matrix(n, bounds.size()), bounds, seed, SamplingStrategy::uniform};
    for (std::size_t d = 0; d < bounds.size(); ++d) {
        SplitMix64 rng(seed, d);
        const double width = bounds[d].high - bounds[d].low;
        for (std::size_t i = 0; i < n; ++i) {
            s.points(i, d) = bounds[d].low + rng.uniform() * width;
        }
    }
    return s;
}

SampleSet generate_lhs(std::size_t n, const std::vector<Interval>& bounds, std::uint64_t seed) {
    check_box(n, bounds);
    SampleSet s{Matrix(n, bounds.size()), bounds, seed, SamplingStrategy::lhs};
    const double dn = static_cast<double>(n);
    std::vector<std::size_t> strata(n);
    for (std::size_t d = 0; d < bounds.size(); ++d) {
        SplitMix64 rng(seed, d);
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        // Fisher-Yates; std::shuffle is not specified bit-exactly across
        // standard libraries.
        for (std::size_t i = n; i > 1; --i) {
            std::swap(strata[i - 1], strata[rng.below(i)]);
        }
        const double width = bounds[d].high - bounds[d].low;
        for (std::size_t i = 0; i < n; ++i) {
            const double stratum = static_cast<double>(strata[i]);
            double u = (stratum + rng.uniform()) / dn;
            // Rounding must never push a point into the next stratum.
            const double upper = (stratum + 1.0) / dn;
            if (u >= upper) {
                u = std::nextafter(upper, 0.0);
            }
            s.points(i, d) = bounds[d].low + u * width;
        }
    }
    return s;
}

SampleSet parse_samples(std::string_view csv_text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    for (auto line : split(csv_text, '\n')) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        for (auto cell : split(line, ',')) {
            try {
                row.push_back(parse_double(trim(cell)));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("line " + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " columns, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("sample file contains no points");
    }
    SampleSet s;
    s.points = Matrix::from_rows(rows);
    s.strategy = SamplingStrategy::external;
    s.bounds.resize(s.dimension());
    for (std::size_t d = 0; d < s.dimension(); ++d) {
        double lo = s.points(0, d);
        double hi = lo;
        for (std::size_t i = 1; i < s.size(); ++i) {
            lo = std::min(lo, s.points(i, d));
            hi = std::max(hi, s.points(i, d));
        }
        s.bounds[d] = {lo, hi};
    }
    return s;
}

SampleSet load_samples(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_samples(buf.str());
}

std::string format_samples(const SampleSet& samples) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (std::size_t d = 0; d < samples.dimension(); ++d) {
            if (d > 0) {
                out.push_back(',');
            }
            // Shortest text that parses back to the same double.
            const auto res = std::to_chars(buf, buf + sizeof(buf), samples.points(i, d));
            out.append(buf, res.ptr);
        }
        out.push_back('\n');
    }
    return out;
}

void save_samples(const SampleSet& samples, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << format_samples(samples);
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace actsig

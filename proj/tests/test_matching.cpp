#include "doctest.h"

#include <numeric>
#include <set>

#include "actsig/errors.hpp"
#include "actsig/matching.hpp"
#include "test_util.hpp"

using namespace actsig;

namespace {

CostMatrix plain(const std::vector<std::vector<double>>& rows) {
    CostMatrix c;
    c.costs = Matrix::from_rows(rows);
    c.row_ids.resize(c.costs.rows());
    c.col_ids.resize(c.costs.cols());
    std::iota(c.row_ids.begin(), c.row_ids.end(), 0);
    std::iota(c.col_ids.begin(), c.col_ids.end(), 0);
    return c;
}

} // namespace

TEST_CASE("assignment examples") {
    auto m = solve_assignment(plain({{0, 1}, {1, 0}}));
    REQUIRE(m.pairs.size() == 2);
    CHECK(m.pairs[0] == MatchedPair{0, 0, 0.0});
    CHECK(m.pairs[1] == MatchedPair{1, 1, 0.0});
    CHECK(m.total_cost == 0.0);

    // Diagonal 1+1 = 2 beats the cross pairing 2+3 = 5.
    m = solve_assignment(plain({{1, 2}, {3, 1}}));
    CHECK(m.pairs[0].col_id == 0);
    CHECK(m.pairs[1].col_id == 1);
    CHECK(m.total_cost == 2.0);

    CHECK_THROWS_AS(solve_assignment(CostMatrix{}), EmptyMatrix);
    CHECK_THROWS_AS(solve_assignment(plain({{1, NAN}})), ValueError);
}

TEST_CASE("rectangular assignment keeps ids and leaves extras unmatched") {
    CostMatrix c = plain({{0.9, 0.1, 0.5}, {0.2, 0.8, 0.3}});
    c.row_ids = {4, 7};
    c.col_ids = {10, 11, 12};
    auto m = solve_assignment(c);
    REQUIRE(m.pairs.size() == 2);
    CHECK(m.pairs[0] == MatchedPair{4, 11, 0.1});
    CHECK(m.pairs[1] == MatchedPair{7, 10, 0.2});

    // Tall matrix: same optimum on the transpose.
    CostMatrix t;
    t.costs = c.costs.transposed();
    t.row_ids = c.col_ids;
    t.col_ids = c.row_ids;
    auto mt = solve_assignment(t);
    REQUIRE(mt.pairs.size() == 2);
    CHECK(mt.total_cost == doctest::Approx(m.total_cost));
    CHECK(mt.pairs[0] == MatchedPair{10, 7, 0.2});
    CHECK(mt.pairs[1] == MatchedPair{11, 4, 0.1});
}

TEST_CASE("assignment matches exhaustive search") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::uniform_int_distribution<int> grid(0, 512);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = dim(rng);
        const std::size_t c = dim(rng);
        Matrix m(r, c);
        for (double& v : m.data()) {
            // MinHash-like costs: multiples of 1/512, so ties are common.
            v = grid(rng) / 512.0;
        }
        CostMatrix cm;
        cm.costs = m;
        const auto sol = solve_assignment(cm);
        CHECK(sol.pairs.size() == std::min(r, c));
        CHECK(sol.total_cost == test::brute_force_assignment(m));
        std::set<std::size_t> rows;
        std::set<std::size_t> cols;
        double sum = 0.0;
        for (const auto& p : sol.pairs) {
            rows.insert(p.row_id);
            cols.insert(p.col_id);
            sum += p.cost;
        }
        CHECK(rows.size() == sol.pairs.size());
        CHECK(cols.size() == sol.pairs.size());
        CHECK(sum == sol.total_cost);
    }
}

TEST_CASE("assignment is deterministic") {
    std::mt19937_64 rng(5);
    CostMatrix c;
    c.costs = test::random_matrix(rng, 20, 25, 0, 1);
    const auto a = solve_assignment(c);
    const auto b = solve_assignment(c);
    CHECK(a.pairs == b.pairs);
}

TEST_CASE("layer_distance") {
    Matching zero{{{0, 0, 0.0}, {1, 1, 0.0}}, 0.0};
    CHECK(layer_distance(zero) == 0.0);
    Matching single{{{3, 4, 0.4}}, 0.4};
    CHECK(layer_distance(single) == 0.4);
    CHECK_THROWS_AS(layer_distance(Matching{}), EmptyMatching);
}

TEST_CASE("cost matrix from sketches") {
    const auto f = build_hash_family(64, 3);
    LayerSketches a;
    a.emplace(2, sketch(std::vector<std::uint32_t>{1, 2, 3}, f));
    a.emplace(5, sketch(std::vector<std::uint32_t>{7, 8}, f));
    const auto self = build_cost_matrix(a, a);
    CHECK(self.row_ids == std::vector<std::size_t>{2, 5});
    CHECK(self.costs(0, 0) == 0.0);
    CHECK(self.costs(1, 1) == 0.0);

    LayerSketches one;
    one.emplace(0, sketch(std::vector<std::uint32_t>{2, 3, 4}, f));
    const auto c11 = build_cost_matrix(one, LayerSketches{{9, a.at(2)}});
    REQUIRE(c11.costs.rows() == 1);
    CHECK(c11.costs(0, 0) == estimate_distance(one.at(0), a.at(2)));

    LayerSketches other;
    other.emplace(0, sketch(std::vector<std::uint32_t>{1}, build_hash_family(64, 4)));
    CHECK_THROWS_AS(build_cost_matrix(a, other), FamilyMismatch);
}

TEST_CASE("compare_layers properties") {
    std::mt19937_64 rng(99);
    const SampleSet xs = generate_lhs(2000, {{-5, 5}, {-5, 5}}, 1);
    const auto family = build_hash_family(128, 42);
    const Network a = test::random_network(rng, {2, 16, 1}, 2.0);
    const Network b = test::random_network(rng, {2, 12, 1}, 2.0);

    const auto self = compare_layers(a, a, 0, xs, family);
    CHECK(self.layer_distance == 0.0);

    const auto ab = compare_layers(a, b, 0, xs, family);
    const auto ba = compare_layers(b, a, 0, xs, family);
    CHECK(std::abs(ab.layer_distance - ba.layer_distance) <= 1e-12);
    CHECK(ab.layer_distance >= 0.0);
    CHECK(ab.layer_distance <= 1.0);
    CHECK(ab.matching.pairs.size() ==
          std::min(ab.filter_a.report.representatives.size(), ab.filter_b.report.representatives.size()));
    CHECK(ab.unmatched_a.size() + ab.matching.pairs.size() == ab.filter_a.report.representatives.size());
    CHECK(ab.unmatched_b.size() + ab.matching.pairs.size() == ab.filter_b.report.representatives.size());

    std::vector<std::size_t> perm(16);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto pb = compare_layers(test::permute_neurons(a, 0, perm), b, 0, xs, family);
    CHECK(std::abs(pb.layer_distance - ab.layer_distance) <= 1e-12);

    CHECK_THROWS_AS(compare_layers(a, b, 3, xs, family), IndexError);
    const SampleSet xs3 = generate_uniform(10, {{0, 1}, {0, 1}, {0, 1}}, 1);
    CHECK_THROWS_AS(compare_layers(a, b, 0, xs3, family), ShapeError);
}

TEST_CASE("compare_layers on a deeper layer propagates the samples") {
    std::mt19937_64 rng(12);
    const SampleSet xs = generate_lhs(1500, {{-3, 3}, {-3, 3}, {-3, 3}}, 2);
    const auto family = build_hash_family(64, 42);
    const Network a = test::random_network(rng, {3, 10, 8, 1}, 1.5);
    const auto self = compare_layers(a, a, 1, xs, family, {true});
    CHECK(self.layer_distance == 0.0);
    REQUIRE(self.validation.has_value());
    CHECK(self.validation->exact_layer_distance == 0.0);
    CHECK(self.filter_a.n_neurons == 8);
}

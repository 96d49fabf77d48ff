#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>
#include <set>

#include "actsig/errors.hpp"
#include "actsig/sketching.hpp"
#include "test_util.hpp"

using namespace actsig;

TEST_CASE("required_hashes") {
    CHECK(required_hashes(0.05, 0.1) == 738);
    CHECK(required_hashes(0.05, 0.05) == 2952);
    // ln(2 / alpha) = 1.
    CHECK(required_hashes(2.0 / std::numbers::e, 1.0) == 2);
    // ln(2 / alpha) = 2.
    CHECK(required_hashes(2.0 / (std::numbers::e * std::numbers::e), 1.0) == 4);
    CHECK_THROWS_AS(required_hashes(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(required_hashes(0.05, 0.0), DomainError);
    CHECK_THROWS_AS(required_hashes(0.05, 1.5), DomainError);
}

TEST_CASE("resolution warning threshold") {
    CHECK(below_resolution(0.0001, 1000));
    CHECK_FALSE(below_resolution(0.001, 1000));
    CHECK_FALSE(below_resolution(0.1, 16000));
}

TEST_CASE("mod 2^61-1 arithmetic matches 128-bit remainder") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t a = rng() % kMersenne61;
        const std::uint64_t x = rng() >> (i % 64);
        const std::uint64_t b = rng() % kMersenne61;
        const uint128 expect = (static_cast<uint128>(a) * x + b) % kMersenne61;
        CHECK(mul_add_mod61(a, x, b) == static_cast<std::uint64_t>(expect));
    }
}

TEST_CASE("hash family") {
    const auto f = build_hash_family(512, 42);
    CHECK(f.k == 512);
    CHECK(f.params.size() == 512);
    std::set<std::pair<std::uint64_t, std::uint64_t>> distinct;
    for (const auto& p : f.params) {
        CHECK(p.a >= 1);
        CHECK(p.a < kMersenne61);
        CHECK(p.b < kMersenne61);
        distinct.emplace(p.a, p.b);
    }
    CHECK(distinct.size() == 512);
    CHECK(build_hash_family(512, 42).params == f.params);
    CHECK(build_hash_family(512, 43).params != f.params);
    CHECK(f.hash(0, 5) == (static_cast<uint128>(f.params[0].a) * 6 + f.params[0].b) % kMersenne61);
    CHECK_THROWS_AS(build_hash_family(0, 1), DomainError);
}

TEST_CASE("worked permutation example gives MinHash 2") {
    // Universe {1..6} stored 0-based; pi(1..6) = (3,1,6,2,4,5).
    const std::array<std::uint64_t, 6> pi{3, 1, 6, 2, 4, 5};
    // V = [1,0,0,1,1,0] -> active {1,4,5} -> 0-based {0,3,4}.
    const auto m = test::pack({{true, false, false, true, true, false}});
    const auto active = m.active_indices(0);
    const auto s = sketch_with(active, 1, [&](std::size_t, std::uint64_t i) { return pi[i]; }, 0);
    CHECK(s.values == std::vector<std::uint64_t>{2});
}

TEST_CASE("sketch basics") {
    const auto f = build_hash_family(64, 7);
    const std::vector<std::uint32_t> single{17};
    const auto s = sketch(single, f);
    for (std::size_t t = 0; t < 64; ++t) {
        CHECK(s.values[t] == f.hash(t, 17));
    }
    CHECK_THROWS_AS(sketch(std::vector<std::uint32_t>{}, f), EmptySetError);

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::uint32_t> a;
        std::vector<std::uint32_t> ab;
        for (std::uint32_t i = 0; i < 400; ++i) {
            const auto r = rng() % 3;
            if (r == 0) {
                a.push_back(i);
            }
            if (r != 2) {
                ab.push_back(i);
            }
        }
        if (a.empty()) {
            continue;
        }
        const auto sa = sketch(a, f);
        const auto sab = sketch(ab, f);
        for (std::size_t t = 0; t < 64; ++t) {
            CHECK(sab.values[t] <= sa.values[t]);
        }
    }
}

TEST_CASE("estimate_distance") {
    const auto f = build_hash_family(128, 1);
    const std::vector<std::uint32_t> a{1, 5, 9, 30};
    const auto sa = sketch(a, f);
    CHECK(estimate_distance(sa, sa) == 0.0);

    MinHashSketch other = sa;
    for (auto& v : other.values) {
        v += 1;
    }
    CHECK(estimate_distance(sa, other) == 1.0);

    const auto g = build_hash_family(128, 2);
    CHECK_THROWS_AS(estimate_distance(sa, sketch(a, g)), FamilyMismatch);
    CHECK_THROWS_AS(estimate_distance(sa, sketch(a, build_hash_family(64, 1))), FamilyMismatch);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint32_t> x;
        std::vector<std::uint32_t> y;
        for (std::uint32_t i = 0; i < 200; ++i) {
            if (rng() % 2) {
                x.push_back(i);
            }
            if (rng() % 2) {
                y.push_back(i);
            }
        }
        const double r = estimate_distance(sketch(x, f), sketch(y, f));
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        CHECK(r == estimate_distance(sketch(y, f), sketch(x, f)));
        CHECK(std::fmod(r * 128.0, 1.0) == 0.0);
    }
}

TEST_CASE("sketch_layer covers exactly the representatives") {
    const auto f = build_hash_family(32, 42);
    SUBCASE("one dead, two unique") {
        const auto m = test::pack({{0, 0, 0}, {1, 0, 0}, {0, 1, 1}});
        const auto sk = sketch_layer(m, classify_neurons(m), f);
        CHECK(sk.size() == 2);
        CHECK(sk.count(1) == 1);
        CHECK(sk.count(2) == 1);
    }
    SUBCASE("duplicate pair keyed by the smaller index") {
        const auto m = test::pack({{1, 0, 1}, {0, 1, 0}, {1, 0, 1}});
        const auto sk = sketch_layer(m, classify_neurons(m), f);
        CHECK(sk.size() == 2);
        CHECK(sk.count(0) == 1);
        CHECK(sk.count(2) == 0);
    }
    SUBCASE("unfiltered dead neuron is an error") {
        const auto m = test::pack({{0, 0, 0}, {1, 0, 0}});
        NeuronFilterReport bogus;
        bogus.representatives = {0, 1};
        CHECK_THROWS_AS(sketch_layer(m, bogus, f), EmptySetError);
    }
}

TEST_CASE("sketch file round trip") {
    std::mt19937_64 rng(9);
    test::BoolRows rows(6, std::vector<bool>(300));
    for (auto& r : rows) {
        for (std::size_t s = 0; s < 300; ++s) {
            r[s] = rng() % 2;
        }
    }
    const auto m = test::pack(rows);
    const auto f = build_hash_family(512, 42);
    const auto sk = sketch_layer(m, classify_neurons(m), f);
    const auto dir = test::temp_dir("sketch_file");
    save_sketches(sk, 512, 42, dir / "s.json");
    const auto back = load_sketches(dir / "s.json");
    CHECK(back == sk);
    CHECK_THROWS_AS(parse_sketches(R"({"k":2,"master_seed":1,"sketches":{"0":[1]}})"), ParseError);
    CHECK_THROWS_AS(parse_sketches(R"({"k":1,"master_seed":1,"sketches":{"x":[1]}})"), ParseError);
    CHECK_THROWS_AS(parse_sketches("[]"), ParseError);
}

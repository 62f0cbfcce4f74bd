#include <doctest.h>

#include <set>

#include <nlohmann/json.hpp>

#include "critmatch/gen.hpp"
#include "critmatch/model.hpp"

using namespace critmatch;
using namespace critmatch::gen;

TEST_CASE("same parameters, same instance") {
    GenParams p{6, 7, 0.6, 0.4, 0.3, 0.3, 99};
    CHECK(random_instance(p) == random_instance(p));
    auto q = p;
    q.seed = 100;
    CHECK_FALSE(random_instance(p) == random_instance(q));
}

TEST_CASE("degenerate corners") {
    GenParams p{5, 4, 0.0, 0.0, 0.0, 0.0, 1};
    CHECK(random_instance(p).edges.empty());

    p.edge_probability = 1.0;
    auto full = random_instance(p);
    CHECK(full.edges.size() == 20);
    // strict lists: every A-side rank appears once
    for (std::size_t a = 0; a < 5; ++a) {
        std::set<Rank> ranks;
        for (const auto& e : full.edges)
            if (e.a == a) ranks.insert(e.rank_a);
        CHECK(ranks == std::set<Rank>{1, 2, 3, 4});
    }
    CHECK(full.s() + full.t() == 0);

    p.tie_density = 1.0;
    p.critical_fraction_a = p.critical_fraction_b = 1.0;
    auto tied = random_instance(p);
    for (const auto& e : tied.edges) {
        CHECK(e.rank_a == 1);
        CHECK(e.rank_b == 1);
    }
    CHECK(tied.s() == 5);
    CHECK(tied.t() == 4);

    CHECK(random_instance({0, 0, 0.5, 0.5, 0.5, 0.5, 3}) == Instance{});
}

TEST_CASE("bad parameters") {
    CHECK_THROWS_AS(random_instance({2, 2, 1.5, 0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(random_instance({2, 2, 0.5, -0.1, 0, 0, 0}), std::invalid_argument);
    CHECK(check_params({2, 2, 0.5, 0, 2.0, -1.0, 0}).size() == 2);
}

TEST_CASE("growing a side keeps the other vertices' criticality") {
    GenParams p{4, 4, 0.5, 0.3, 0.5, 0.5, 17};
    auto small = random_instance(p);
    p.n_a = 9;
    p.n_b = 9;
    auto big = random_instance(p);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(small.critical_a[i] == big.critical_a[i]);
        CHECK(small.critical_b[i] == big.critical_b[i]);
    }
}

TEST_CASE("generated instances are valid") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        GenParams p{1 + seed % 8, 1 + (seed / 8) % 8, 0.1 * (seed % 11), 0.1 * (seed % 7), 0.5, 0.5, seed};
        auto inst = random_instance(p);
        CHECK(validate(inst).ok());
    }
}

TEST_CASE("params JSON round trip and seed derivation") {
    GenParams p{3, 8, 0.25, 0.75, 0.1, 0.9, 12345678901234ull};
    auto back = params_from_json(params_to_json(p));
    CHECK(back.n_a == p.n_a);
    CHECK(back.n_b == p.n_b);
    CHECK(back.edge_probability == p.edge_probability);
    CHECK(back.tie_density == p.tie_density);
    CHECK(back.seed == p.seed);
    CHECK(params_from_json(nlohmann::json::object()).n_a == GenParams{}.n_a);
    CHECK_THROWS_AS(params_from_json({{"tie_density", 3.0}}), std::invalid_argument);

    CHECK(derive_seed(5, 0) == derive_seed(5, 0));
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_seed(5, i));
    CHECK(seeds.size() == 1000);
}

#include <doctest.h>

#include <random>

#include "critmatch/gen.hpp"
#include "critmatch/oracle.hpp"
#include "critmatch/verify.hpp"
#include "fixtures.hpp"

using namespace critmatch;
using namespace critmatch::oracle;
using namespace critmatch::testing;

TEST_CASE("matching counts") {
    CHECK(count_matchings(fig1()) == 19);
    CHECK(count_matchings(make_instance(1, 1, {}, {}, {{0, 0, 1, 1}})) == 2);
    CHECK(count_matchings(Instance{}) == 1);
    CHECK(count_matchings(Instance(3, 2)) == 1);
}

TEST_CASE("3x4 example ground truth") {
    auto r = max_critical_rsm(fig1());
    CHECK(r.max_coverage == 2);
    CHECK(r.num_critical == 5);
    CHECK(r.num_critical_rsm == 2);
    CHECK(r.max_critical_rsm_size == 3);
    CHECK(r.witness == kFig1M2);
    CHECK(r.per_side_critical_counts == verify::CriticalCounts{1, 1});
    CHECK(r.per_side_counts_shared);
    CHECK(max_stable_size(fig1()) == 3);
    CHECK(brute_force_coverage(fig1()) == 2);
}

TEST_CASE("2x2 and 1x2 example ground truth") {
    CHECK(max_stable_size(fig2a()) == 1);
    auto r = max_critical_rsm(fig2b());
    CHECK(r.num_critical_rsm == 2);
    CHECK(r.max_critical_rsm_size == 1);
}

TEST_CASE("popularity votes") {
    // b0 and a0 both prefer {(a0,b0)}; b1 prefers having a0.
    auto v = count_votes(fig2b(), {{0, 0}}, {{0, 1}});
    CHECK(v.for_first == 2);
    CHECK(v.for_second == 1);
    CHECK(more_popular(fig2b(), {{0, 0}}, {{0, 1}}) == Preference::First);
    CHECK(more_popular(fig2b(), {{0, 1}}, {{0, 0}}) == Preference::Second);

    // Two votes each way.
    CHECK(more_popular(fig2a(), {{0, 0}}, {{0, 1}, {1, 0}}) == Preference::Tie);
    CHECK(more_popular(fig1(), kFig1M2, kFig1M2) == Preference::Tie);
    CHECK_THROWS_AS(count_votes(fig1(), {{0, 0}, {0, 1}}, kFig1M2), verify::MatchingError);
}

TEST_CASE("size guard") {
    Instance big(11, 2);
    CHECK_THROWS_AS(count_matchings(big), SizeGuardError);
    CHECK_THROWS_AS(max_critical_rsm(big), SizeGuardError);
    CHECK(count_matchings(big, 11) == 1);
    CHECK_THROWS_AS(count_matchings(fig1(), 3), SizeGuardError);
}

TEST_CASE("property: enumeration agrees with subset brute force") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        gen::GenParams p;
        p.n_a = rng() % 5;
        p.n_b = rng() % 5;
        p.edge_probability = (rng() % 11) / 10.0;
        p.critical_fraction_a = (rng() % 11) / 10.0;
        p.critical_fraction_b = (rng() % 11) / 10.0;
        p.seed = rng();
        auto inst = gen::random_instance(p);
        std::size_t subsets = 0, best = 0;
        for_each_subset_matching(inst, [&](const Matching& m) {
            ++subsets;
            best = std::max(best, coverage(inst, m));
        });
        CHECK(count_matchings(inst) == subsets);
        CHECK(brute_force_coverage(inst) == best);
        CHECK(verify::max_critical_coverage(inst) == best);
    }
}

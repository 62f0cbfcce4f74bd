#include <doctest.h>

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "critmatch/engine.hpp"
#include "critmatch/gen.hpp"
#include "critmatch/verify.hpp"
#include "fixtures.hpp"

using namespace critmatch;
using namespace critmatch::verify;
using namespace critmatch::testing;

namespace {

gen::GenParams random_params(std::mt19937_64& rng, std::size_t max_side) {
    gen::GenParams p;
    p.n_a = rng() % (max_side + 1);
    p.n_b = rng() % (max_side + 1);
    p.edge_probability = (rng() % 11) / 10.0;
    p.tie_density = (rng() % 11) / 10.0;
    p.critical_fraction_a = (rng() % 11) / 10.0;
    p.critical_fraction_b = (rng() % 11) / 10.0;
    p.seed = rng();
    return p;
}

}  // namespace

TEST_CASE("matching checks") {
    Checker checker(fig1());
    CHECK(checker.is_matching(kFig1M1));
    CHECK(checker.is_matching({}));
    CHECK_FALSE(checker.is_matching({{0, 0}, {0, 1}}));
    CHECK_FALSE(checker.is_matching({{0, 0}, {1, 0}}));
    CHECK_FALSE(checker.is_matching({{2, 0}}));  // not an edge
    CHECK_FALSE(checker.is_matching({{7, 0}}));
    CHECK_THROWS_AS(checker.require_matching({{0, 0}, {0, 1}}), MatchingError);
    CHECK_THROWS_AS(blocking_pairs(fig1(), {{0, 0}, {0, 1}}), MatchingError);
}

TEST_CASE("3x4 example, matching M1 has an unjustified blocking pair") {
    auto bps = blocking_pairs(fig1(), kFig1M1);
    REQUIRE(bps.size() == 2);
    CHECK(bps[0] == BlockingPair{0, 0, true, true});
    CHECK(bps[1] == BlockingPair{1, 3, false, false});
    auto verdict = is_rsm(fig1(), kFig1M1);
    CHECK_FALSE(verdict.is_rsm);
    CHECK(verdict.unjustified == std::vector<BlockingPair>{{1, 3, false, false}});
}

TEST_CASE("3x4 example, matching M2 is a critical RSM") {
    auto bps = blocking_pairs(fig1(), kFig1M2);
    CHECK(bps == std::vector<BlockingPair>{{0, 0, true, false}});
    CHECK(is_rsm(fig1(), kFig1M2).is_rsm);
    CHECK(critical_counts(fig1(), kFig1M2) == CriticalCounts{1, 1});
    CHECK(max_critical_coverage(fig1()) == 2);
    CHECK(is_critical(fig1(), kFig1M2));

    auto report = make_report(fig1(), kFig1M2);
    CHECK(report.passed());
    CHECK(report.critical_covered == 2);
}

TEST_CASE("a matching missing the critical vertices is not critical") {
    Matching m{{0, 0}, {2, 2}};
    CHECK(critical_counts(fig1(), m).total() == 0);
    CHECK_FALSE(is_critical(fig1(), m));
    CHECK_FALSE(make_report(fig1(), m).passed());
}

TEST_CASE("2x2 example: the perfect matching is not relaxed stable") {
    Matching m{{0, 1}, {1, 0}};
    auto verdict = is_rsm(fig2a(), m);
    CHECK_FALSE(verdict.is_rsm);
    CHECK(verdict.unjustified == std::vector<BlockingPair>{{0, 0, false, false}});
    CHECK(is_rsm(fig2a(), {{0, 0}}).is_rsm);
}

TEST_CASE("1x2 example: either single edge is a critical RSM") {
    CHECK(max_critical_coverage(fig2b()) == 1);
    auto bps = blocking_pairs(fig2b(), {{0, 1}});
    CHECK(bps == std::vector<BlockingPair>{{0, 0, true, false}});
    CHECK(make_report(fig2b(), {{0, 1}}).passed());
    CHECK(make_report(fig2b(), {{0, 0}}).passed());
}

TEST_CASE("report on a non-matching") {
    auto report = make_report(fig1(), {{0, 0}, {0, 1}});
    CHECK_FALSE(report.is_matching);
    CHECK_FALSE(report.matching_error.empty());
    CHECK_FALSE(report.passed());
    auto j = to_json(report);
    CHECK(j["is_matching"] == false);
    CHECK(j.contains("matching_error"));
    CHECK(j["structure_report"].is_null());
}

TEST_CASE("level partition and structure of the solver output on the 3x4 example") {
    auto lm = solve(fig1()).matching;
    auto part = build_level_partition(fig1(), lm);
    CHECK(part.a_part == std::vector<std::size_t>{0, 1, 1});
    CHECK(part.b_part == std::vector<std::size_t>{1, 0, 1, 1});
    auto report = check_structure(fig1(), lm);
    CHECK(report.ok());

    auto full = make_report(fig1(), lm);
    REQUIRE(full.structure);
    CHECK(full.passed());
    CHECK(to_json(full)["structure_report"]["ok"] == true);
}

TEST_CASE("structure audit flags a fabricated steep edge") {
    // a0 placed at level 2 while its critical neighbour b1 stays unmatched.
    LeveledMatching lm{{{0, 0, Level::ordinary(2)}}};
    auto report = check_structure(fig1(), lm);
    CHECK_FALSE(report.ok());
    bool found = std::any_of(report.steep_downward_edges.begin(), report.steep_downward_edges.end(),
                             [](const EdgeWitness& w) { return w.a == 0 && w.b == 1 && w.bucket_a == 2 && w.bucket_b == 0; });
    CHECK(found);
    CHECK_FALSE(report.property1_violations.empty());
}

TEST_CASE("structure audit flags a blocking pair that is not upward") {
    // Level 0 everywhere on the 2x2 example: the blocking pair (a0, b0) sits level.
    LeveledMatching lm{{{0, 1, Level::ordinary(0)}, {1, 0, Level::ordinary(0)}}};
    auto report = check_structure(fig2a(), lm);
    REQUIRE(report.non_upward_blocking_pairs.size() == 1);
    CHECK(report.non_upward_blocking_pairs[0].a == 0);
    CHECK(report.non_upward_blocking_pairs[0].b == 0);
}

TEST_CASE("matching file round trip") {
    auto m = parse_matching(read_file(data_path("fig1_m2.match")));
    CHECK(m == kFig1M2);
    CHECK(parse_matching(serialize_matching(m)) == m);
    CHECK(parse_matching("# nothing\n\n").empty());
    CHECK_THROWS_AS(parse_matching("pair 0\n"), ParseError);
    CHECK_THROWS_AS(parse_matching("pair 0 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_matching("pair -1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_matching("edge 0 1\n"), ParseError);
}

TEST_CASE("property: blocking pairs agree with the naive double loop") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = gen::random_instance(random_params(rng, 4));
        if (inst.edges.size() > 12) continue;
        Checker checker(inst);
        for_each_subset_matching(inst, [&](const Matching& m) {
            auto mine = checker.blocking_pairs(m);
            auto naive = naive_blocking_pairs(inst, m);
            REQUIRE(mine.size() == naive.size());
            for (std::size_t i = 0; i < mine.size(); ++i) {
                CHECK(mine[i].a == naive[i].a);
                CHECK(mine[i].b == naive[i].b);
                CHECK(mine[i].justified() == naive[i].justified);
            }
            ++checked;
        });
    }
    CHECK(checked > 1000);
}

TEST_CASE("property: max critical coverage equals subset brute force") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = gen::random_instance(random_params(rng, 5));
        if (inst.edges.size() > 14) continue;
        std::size_t best = 0;
        for_each_subset_matching(inst, [&](const Matching& m) { best = std::max(best, coverage(inst, m)); });
        CHECK(max_critical_coverage(inst) == best);
    }
}

TEST_CASE("property: marking more vertices critical never unjustifies a pair") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 150; ++trial) {
        auto inst = gen::random_instance(random_params(rng, 4));
        if (inst.edges.size() > 10) continue;
        auto wider = inst;
        for (std::size_t a = 0; a < wider.n_a; ++a) wider.critical_a[a] = wider.critical_a[a] || rng() % 2;
        for (std::size_t b = 0; b < wider.n_b; ++b) wider.critical_b[b] = wider.critical_b[b] || rng() % 2;
        for_each_subset_matching(inst, [&](const Matching& m) {
            auto before = blocking_pairs(inst, m);
            auto after = blocking_pairs(wider, m);
            REQUIRE(before.size() == after.size());
            for (std::size_t i = 0; i < before.size(); ++i)
                if (before[i].justified()) CHECK(after[i].justified());
        });
    }
}

TEST_CASE("property: solver output passes the full audit") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 500; ++trial) {
        auto p = random_params(rng, 8);
        auto inst = gen::random_instance(p);
        CAPTURE(p.seed);
        auto report = make_report(inst, solve(inst).matching);
        CHECK(report.is_matching);
        CHECK(report.is_rsm);
        CHECK(report.is_critical);
        REQUIRE(report.structure);
        CHECK(report.structure->property1_violations.empty());
        CHECK(report.structure->steep_downward_edges.empty());
        CHECK(report.structure->non_upward_blocking_pairs.empty());
    }
}

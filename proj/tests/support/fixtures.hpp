#pragma once

// Fixtures and test-only oracles. Nothing here calls into the engine, the
// verifier or the oracle module, so the suites can compare against it.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "critmatch/model.hpp"

namespace critmatch::testing {

inline std::string data_path(const std::string& name) { return std::string(CRITMATCH_TEST_DATA) + "/" + name; }

inline Instance make_instance(std::size_t n_a, std::size_t n_b, std::initializer_list<std::size_t> crit_a,
                              std::initializer_list<std::size_t> crit_b, std::initializer_list<Edge> edges) {
    Instance inst(n_a, n_b);
    for (auto a : crit_a) inst.critical_a[a] = true;
    for (auto b : crit_b) inst.critical_b[b] = true;
    inst.edges.assign(edges.begin(), edges.end());
    return inst;
}

// Three A-vertices and four B-vertices; a1 and b1 critical (0-based).
inline Instance fig1() {
    return make_instance(3, 4, {1}, {1},
                         {{0, 0, 1, 1}, {0, 1, 2, 1}, {1, 0, 2, 2}, {1, 2, 1, 1}, {1, 3, 1, 1}, {2, 2, 1, 1}});
}
inline const Matching kFig1M1{{0, 1}, {1, 0}, {2, 2}};
inline const Matching kFig1M2{{0, 1}, {1, 3}, {2, 2}};

inline Instance fig2a() { return make_instance(2, 2, {}, {}, {{0, 0, 1, 1}, {0, 1, 2, 1}, {1, 0, 1, 2}}); }
inline Instance fig2b() { return make_instance(1, 2, {}, {0, 1}, {{0, 0, 1, 1}, {0, 1, 2, 1}}); }

/// Every subset of the edge list that happens to be a matching. Independent
/// of the oracle module's vertex-by-vertex recursion.
inline void for_each_subset_matching(const Instance& inst, const std::function<void(const Matching&)>& visit) {
    const std::size_t m = inst.edges.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        std::vector<bool> ua(inst.n_a, false), ub(inst.n_b, false);
        Matching cur;
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            if (!(mask >> i & 1)) continue;
            const auto& e = inst.edges[i];
            if (ua[e.a] || ub[e.b]) ok = false;
            ua[e.a] = ub[e.b] = true;
            cur.emplace_back(e.a, e.b);
        }
        if (ok) visit(cur);
    }
}

inline std::optional<const Edge*> find_edge(const Instance& inst, std::size_t a, std::size_t b) {
    for (const auto& e : inst.edges)
        if (e.a == a && e.b == b) return &e;
    return std::nullopt;
}

struct NaivePair {
    std::size_t a, b;
    bool justified;
};

/// Straight double loop over A x B with linear edge lookups.
inline std::vector<NaivePair> naive_blocking_pairs(const Instance& inst, const Matching& m) {
    std::vector<NaivePair> out;
    auto partner_a = [&](std::size_t a) -> std::optional<std::size_t> {
        for (auto [x, y] : m)
            if (x == a) return y;
        return std::nullopt;
    };
    auto partner_b = [&](std::size_t b) -> std::optional<std::size_t> {
        for (auto [x, y] : m)
            if (y == b) return x;
        return std::nullopt;
    };
    for (std::size_t a = 0; a < inst.n_a; ++a)
        for (std::size_t b = 0; b < inst.n_b; ++b) {
            auto e = find_edge(inst, a, b);
            if (!e) continue;
            auto ma = partner_a(a), mb = partner_b(b);
            if (ma == b) continue;
            bool a_wants = !ma || (*e)->rank_a < (*find_edge(inst, a, *ma))->rank_a;
            bool b_wants = !mb || (*e)->rank_b < (*find_edge(inst, *mb, b))->rank_b;
            if (a_wants && b_wants)
                out.push_back({a, b, (ma && inst.critical_b[*ma]) || (mb && inst.critical_a[*mb])});
        }
    return out;
}

inline std::size_t coverage(const Instance& inst, const Matching& m) {
    std::size_t c = 0;
    for (auto [a, b] : m) c += (inst.critical_a[a] ? 1 : 0) + (inst.critical_b[b] ? 1 : 0);
    return c;
}

}  // namespace critmatch::testing

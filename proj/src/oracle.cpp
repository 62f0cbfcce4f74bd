#include "critmatch/oracle.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace critmatch::oracle {

namespace {

void check_guard(const Instance& inst, std::size_t guard) {
    if (inst.n_a > guard || inst.n_b > guard)
        throw SizeGuardError("instance " + std::to_string(inst.n_a) + "x" + std::to_string(inst.n_b) +
                             " exceeds the enumeration guard of " + std::to_string(guard) + " per side");
}

class Enumerator {
public:
    Enumerator(const Instance& inst, const std::function<void(const Matching&)>& visit)
        : visit_(visit), nbrs_(inst.n_a), used_(inst.n_b, false) {
        for (const auto& e : inst.edges) nbrs_[e.a].push_back(e.b);
        for (auto& list : nbrs_) std::sort(list.begin(), list.end());
    }

    void run() { recurse(0); }

private:
    void recurse(std::size_t a) {
        if (a == nbrs_.size()) {
            visit_(current_);
            return;
        }
        recurse(a + 1);
        for (auto b : nbrs_[a]) {
            if (used_[b]) continue;
            used_[b] = true;
            current_.emplace_back(a, b);
            recurse(a + 1);
            current_.pop_back();
            used_[b] = false;
        }
    }

    const std::function<void(const Matching&)>& visit_;
    std::vector<std::vector<std::size_t>> nbrs_;
    std::vector<bool> used_;
    Matching current_;
};

}  // namespace

void enumerate_matchings(const Instance& inst, const std::function<void(const Matching&)>& visit,
                         std::size_t guard) {
    check_guard(inst, guard);
    Enumerator(inst, visit).run();
}

std::size_t count_matchings(const Instance& inst, std::size_t guard) {
    std::size_t n = 0;
    enumerate_matchings(inst, [&](const Matching&) { ++n; }, guard);
    return n;
}

OracleResult max_critical_rsm(const Instance& inst, std::size_t guard) {
    verify::Checker checker(inst);
    OracleResult result;
    bool any = false;
    enumerate_matchings(
        inst,
        [&](const Matching& m) {
            auto counts = checker.critical_counts(m);
            auto coverage = counts.total();
            if (!any || coverage > result.max_coverage) {
                any = true;
                result = OracleResult{};
                result.max_coverage = coverage;
                result.per_side_critical_counts = counts;
            }
            if (coverage < result.max_coverage) return;
            ++result.num_critical;
            if (counts != result.per_side_critical_counts) result.per_side_counts_shared = false;
            if (!checker.is_rsm(m).is_rsm) return;
            if (result.num_critical_rsm == 0 || m.size() > result.max_critical_rsm_size) {
                result.max_critical_rsm_size = m.size();
                result.witness = m;
            }
            ++result.num_critical_rsm;
        },
        guard);
    return result;
}

std::size_t max_stable_size(const Instance& inst, std::size_t guard) {
    verify::Checker checker(inst);
    std::size_t best = 0;
    enumerate_matchings(
        inst,
        [&](const Matching& m) {
            if (m.size() > best && checker.blocking_pairs(m).empty()) best = m.size();
        },
        guard);
    return best;
}

std::size_t brute_force_coverage(const Instance& inst, std::size_t guard) {
    std::size_t best = 0;
    enumerate_matchings(
        inst,
        [&](const Matching& m) {
            std::size_t covered = 0;
            for (auto [a, b] : m) covered += (inst.critical_a[a] ? 1 : 0) + (inst.critical_b[b] ? 1 : 0);
            best = std::max(best, covered);
        },
        guard);
    return best;
}

VoteCount count_votes(const Instance& inst, const Matching& first, const Matching& second) {
    verify::Checker checker(inst);
    checker.require_matching(first);
    checker.require_matching(second);

    auto partner_table = [&](const Matching& m, bool a_side) {
        std::vector<std::optional<std::size_t>> table(a_side ? inst.n_a : inst.n_b);
        for (auto [a, b] : m) table[a_side ? a : b] = a_side ? b : a;
        return table;
    };
    VoteCount votes;
    auto tally = [&](std::optional<Rank> r1, std::optional<Rank> r2) {
        if (r1 == r2) return;
        if (!r2 || (r1 && *r1 < *r2))
            ++votes.for_first;
        else
            ++votes.for_second;
    };

    auto fa = partner_table(first, true), sa = partner_table(second, true);
    for (std::size_t a = 0; a < inst.n_a; ++a) {
        auto r1 = fa[a] ? checker.rank_at_a(a, *fa[a]) : std::nullopt;
        auto r2 = sa[a] ? checker.rank_at_a(a, *sa[a]) : std::nullopt;
        tally(r1, r2);
    }
    auto fb = partner_table(first, false), sb = partner_table(second, false);
    for (std::size_t b = 0; b < inst.n_b; ++b) {
        auto r1 = fb[b] ? checker.rank_at_b(*fb[b], b) : std::nullopt;
        auto r2 = sb[b] ? checker.rank_at_b(*sb[b], b) : std::nullopt;
        tally(r1, r2);
    }
    return votes;
}

Preference more_popular(const Instance& inst, const Matching& first, const Matching& second) {
    auto votes = count_votes(inst, first, second);
    if (votes.for_first > votes.for_second) return Preference::First;
    if (votes.for_second > votes.for_first) return Preference::Second;
    return Preference::Tie;
}

nlohmann::json to_json(const OracleResult& r) {
    auto witness = nlohmann::json::array();
    for (auto [a, b] : r.witness) witness.push_back({a, b});
    return {{"max_critical_rsm_size", r.max_critical_rsm_size},
            {"witness", std::move(witness)},
            {"num_critical_rsm", r.num_critical_rsm},
            {"num_critical", r.num_critical},
            {"max_critical_coverage", r.max_coverage},
            {"per_side_critical_counts",
             {{"from_a", r.per_side_critical_counts.from_a}, {"from_b", r.per_side_critical_counts.from_b}}},
            {"per_side_counts_shared", r.per_side_counts_shared}};
}

}  // namespace critmatch::oracle

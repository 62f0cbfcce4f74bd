#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "critmatch/engine.hpp"
#include "critmatch/model.hpp"

// Checkers in this namespace read the instance directly and never call into
// the engine, so they can be used to audit it.
namespace critmatch::verify {

/// The pair list handed in is not a matching of the instance.
class MatchingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct BlockingPair {
    std::size_t a = 0;
    std::size_t b = 0;
    bool justified_by_a = false;  // a is matched and M(a) is critical
    bool justified_by_b = false;  // b is matched and M(b) is critical

    bool justified() const { return justified_by_a || justified_by_b; }
    friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

struct RsmVerdict {
    bool is_rsm = true;
    std::vector<BlockingPair> unjustified;
};

struct CriticalCounts {
    std::size_t from_a = 0;
    std::size_t from_b = 0;
    std::size_t total() const { return from_a + from_b; }
    friend bool operator==(const CriticalCounts&, const CriticalCounts&) = default;
};

/// Rank lookups and matching checks over one instance. Build once and reuse
/// when checking many matchings of the same instance.
class Checker {
public:
    explicit Checker(const Instance& inst);

    /// Throws MatchingError unless every pair is an edge and no endpoint repeats.
    void require_matching(const Matching& m) const;
    bool is_matching(const Matching& m) const;

    std::vector<BlockingPair> blocking_pairs(const Matching& m) const;
    RsmVerdict is_rsm(const Matching& m) const;
    CriticalCounts critical_counts(const Matching& m) const;

    /// Rank a assigns to b, if (a, b) is an edge.
    std::optional<Rank> rank_at_a(std::size_t a, std::size_t b) const;
    std::optional<Rank> rank_at_b(std::size_t a, std::size_t b) const;

    const Instance& instance() const { return inst_; }

private:
    struct Arc {
        std::size_t b;
        Rank rank_a;
        Rank rank_b;
    };
    const Arc* find(std::size_t a, std::size_t b) const;
    void partners(const Matching& m, std::vector<std::optional<std::size_t>>& of_a,
                  std::vector<std::optional<std::size_t>>& of_b) const;

    Instance inst_;
    std::vector<std::vector<Arc>> arcs_;  // per a, sorted by b
};

std::vector<BlockingPair> blocking_pairs(const Instance& inst, const Matching& m);
RsmVerdict is_rsm(const Instance& inst, const Matching& m);
CriticalCounts critical_counts(const Instance& inst, const Matching& m);

/// Largest number of critical vertices any matching can cover, computed
/// exactly as a maximum-weight bipartite matching with edge weight equal
/// to the number of critical endpoints.
std::size_t max_critical_coverage(const Instance& inst);
bool is_critical(const Instance& inst, const Matching& m);

struct LevelPartition {
    std::vector<std::size_t> a_part;
    std::vector<std::size_t> b_part;
    std::size_t s = 0;
    std::size_t t = 0;
};

LevelPartition build_level_partition(const Instance& inst, const LeveledMatching& lm);

struct EdgeWitness {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t bucket_a = 0;
    std::size_t bucket_b = 0;
};

struct StructureReport {
    std::vector<std::string> property1_violations;
    std::vector<EdgeWitness> steep_downward_edges;
    std::vector<EdgeWitness> non_upward_blocking_pairs;

    bool ok() const {
        return property1_violations.empty() && steep_downward_edges.empty() &&
               non_upward_blocking_pairs.empty();
    }
};

StructureReport check_structure(const Instance& inst, const LeveledMatching& lm);

struct VerificationReport {
    bool is_matching = false;
    std::string matching_error;
    std::vector<BlockingPair> blocking_pairs;
    std::vector<BlockingPair> unjustified;
    bool is_rsm = false;
    std::size_t critical_covered = 0;
    std::size_t max_critical_coverage = 0;
    bool is_critical = false;
    std::optional<StructureReport> structure;

    bool passed() const {
        return is_matching && is_rsm && is_critical && (!structure || structure->ok());
    }
};

/// Full report for a plain matching. Never throws on a non-matching; it
/// comes back with is_matching == false instead.
VerificationReport make_report(const Instance& inst, const Matching& m);
/// Same, plus the level-structure audit.
VerificationReport make_report(const Instance& inst, const LeveledMatching& lm);

nlohmann::json to_json(const BlockingPair& bp);
nlohmann::json to_json(const StructureReport& r);
nlohmann::json to_json(const VerificationReport& r);

/// Reads `pair <a> <b>` lines ('#' comments allowed). Throws ParseError.
Matching parse_matching(std::string_view text);
std::string serialize_matching(const Matching& m);

}  // namespace critmatch::verify

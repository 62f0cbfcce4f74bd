#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>

#include <nlohmann/json_fwd.hpp>

#include "critmatch/model.hpp"
#include "critmatch/verify.hpp"

// Exhaustive ground truth for small instances.
namespace critmatch::oracle {

inline constexpr std::size_t kDefaultGuard = 10;

class SizeGuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Calls visit once per matching of inst, the empty matching included.
/// Throws SizeGuardError when either side exceeds `guard` vertices.
void enumerate_matchings(const Instance& inst, const std::function<void(const Matching&)>& visit,
                         std::size_t guard = kDefaultGuard);

std::size_t count_matchings(const Instance& inst, std::size_t guard = kDefaultGuard);

struct OracleResult {
    std::size_t max_critical_rsm_size = 0;
    Matching witness;
    std::size_t num_critical_rsm = 0;
    std::size_t num_critical = 0;
    std::size_t max_coverage = 0;
    /// Per-side critical counts of the first critical matching found.
    verify::CriticalCounts per_side_critical_counts;
    /// Whether every critical matching has exactly those per-side counts.
    bool per_side_counts_shared = true;
};

OracleResult max_critical_rsm(const Instance& inst, std::size_t guard = kDefaultGuard);

/// Largest weakly stable matching, by enumeration.
std::size_t max_stable_size(const Instance& inst, std::size_t guard = kDefaultGuard);

/// Largest number of critical vertices covered by any matching, by enumeration.
std::size_t brute_force_coverage(const Instance& inst, std::size_t guard = kDefaultGuard);

enum class Preference { First, Second, Tie };

struct VoteCount {
    std::size_t for_first = 0;
    std::size_t for_second = 0;
};

/// Head-to-head vote between two matchings. Every vertex votes for the one
/// giving it a strictly better-ranked partner (any partner beats none);
/// equal rank abstains.
VoteCount count_votes(const Instance& inst, const Matching& first, const Matching& second);
Preference more_popular(const Instance& inst, const Matching& first, const Matching& second);

nlohmann::json to_json(const OracleResult& r);

}  // namespace critmatch::oracle

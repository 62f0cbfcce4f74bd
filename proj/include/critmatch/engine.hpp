#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "critmatch/model.hpp"

namespace critmatch {

/// Proposal level of an A-vertex. Ordinary level l is encoded as 2l and the
/// starred sub-level of t as 2t+1, so plain integer comparison gives
/// 0 < 1 < ... < t < t* < t+1 < ... < s+t.
class Level {
public:
    constexpr Level() = default;

    static constexpr Level ordinary(std::size_t l) { return Level(static_cast<std::int64_t>(2 * l)); }
    static constexpr Level star(std::size_t t) { return Level(static_cast<std::int64_t>(2 * t + 1)); }
    static constexpr Level from_code(std::int64_t code) { return Level(code); }

    constexpr std::int64_t code() const { return code_; }
    constexpr bool is_star() const { return code_ % 2 != 0; }
    /// Partition bucket: the starred sub-level collapses onto t.
    constexpr std::size_t bucket() const { return static_cast<std::size_t>(code_ / 2); }

    friend constexpr auto operator<=>(Level, Level) = default;

private:
    constexpr explicit Level(std::int64_t code) : code_(code) {}
    std::int64_t code_ = 0;
};

std::string to_string(Level level);

struct MatchedPair {
    std::size_t a = 0;
    std::size_t b = 0;
    Level level;

    friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

/// Matching whose pairs remember the level at which the final edge was
/// accepted. Pairs are kept sorted by a.
struct LeveledMatching {
    std::vector<MatchedPair> pairs;

    Matching plain() const;
    std::size_t size() const { return pairs.size(); }

    friend bool operator==(const LeveledMatching&, const LeveledMatching&) = default;
};

/// Thrown when a run breaks one of the engine's own invariants. Reaching
/// this is a bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace engine {

struct ProposerState {
    Level level;
    /// Indexed by position in PrefS(a); cleared on every level change.
    std::vector<bool> proposed;
    std::vector<bool> marked;
    std::size_t marked_count = 0;
    /// Next candidate position for strict-list levels.
    std::size_t cursor = 0;
    std::optional<std::size_t> matched_to;
    bool retired = false;
};

struct Suitor {
    std::size_t a = 0;
    Level level;
};

enum class Winner { Challenger, Incumbent };

enum class EventKind { Propose, Accept, Reject, Displace, Mark, Unmark, LevelUp, Retire };

struct Event {
    EventKind kind;
    std::size_t a = 0;
    std::optional<std::size_t> b;
    Level level;
    bool uncertain = false;
};

std::string to_string(const Event& e);

using Observer = std::function<void(const Event&)>;

struct EngineState {
    explicit EngineState(Instance inst);

    Instance instance;
    PreferenceIndex prefs;
    std::size_t s = 0;
    std::size_t t = 0;

    std::vector<ProposerState> proposers;
    std::vector<std::optional<std::size_t>> partner_of_b;
    std::vector<Level> level_of_b;
    /// Set only while b's current edge is an uncertain proposal.
    std::vector<bool> uncertain;
    std::vector<bool> ever_uncertain;
    std::vector<bool> ever_marked;
    std::deque<Suitor> queue;

    std::uint64_t proposal_count = 0;
    std::map<std::int64_t, std::uint64_t> proposals_by_level;
    Observer observer;

    Level top_level() const { return Level::ordinary(s + t); }
    Level ties_level() const { return Level::ordinary(t); }
    Level star_level() const { return Level::star(t); }
    bool in_ties_band(Level l) const { return l == ties_level() || l == star_level(); }
    Rank rank_at_a(std::size_t a, std::size_t pos) const { return prefs.pref_s(a)[pos].rank; }
    std::uint64_t proposal_bound() const;

    void emit(const Event& e) const {
        if (observer) observer(e);
    }
};

struct Favourite {
    std::size_t b = 0;
    std::size_t position = 0;  // in PrefS(a)
    Rank rank = 0;
    int rule = 0;              // 1, 2 or 3: which clause picked b
};

/// Decides whether b takes the challenger over its current partner. Outside
/// the ties band the higher level wins and equal levels need strict
/// preference; inside it a starred challenger also wins rank ties against
/// an unstarred incumbent.
Winner prefers(const EngineState& state, std::size_t b, Suitor challenger, Suitor incumbent);

/// One proposal along PrefSC (below t) or PrefS (above t*).
void critical_propose(EngineState& state, std::size_t a);

std::optional<Favourite> favourite_neighbour(const EngineState& state, std::size_t a);

/// One proposal at level t or t* to the favourite neighbour.
void ties_propose(EngineState& state, std::size_t a);

void advance_level(EngineState& state, std::size_t a);

/// Processes one queue item. Returns false once the queue is empty.
bool step(EngineState& state);

}  // namespace engine

struct RunStats {
    std::uint64_t proposal_count = 0;
    std::uint64_t proposal_bound = 0;
    std::map<std::int64_t, std::uint64_t> proposals_by_level;
    std::vector<Level> final_level;
    std::vector<bool> retired;
    std::size_t s = 0;
    std::size_t t = 0;
};

struct SolveResult {
    LeveledMatching matching;
    RunStats stats;
};

/// Runs the multi-level proposal algorithm to completion. Throws
/// InvariantError if a run-time invariant is broken.
SolveResult solve(const Instance& inst, engine::Observer observer = {});

}  // namespace critmatch

#include "critmatch/engine.hpp"

#include <algorithm>
#include <sstream>

namespace critmatch {

std::string to_string(Level level) {
    if (level.is_star()) return std::to_string(level.bucket()) + "*";
    return std::to_string(level.bucket());
}

Matching LeveledMatching::plain() const {
    Matching out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.emplace_back(p.a, p.b);
    return out;
}

namespace engine {

namespace {

const char* kind_name(EventKind kind) {
    switch (kind) {
    case EventKind::Propose: return "propose";
    case EventKind::Accept: return "accept";
    case EventKind::Reject: return "reject";
    case EventKind::Displace: return "displace";
    case EventKind::Mark: return "mark";
    case EventKind::Unmark: return "unmark";
    case EventKind::LevelUp: return "level-up";
    case EventKind::Retire: return "retire";
    }
    return "?";
}

void note_proposal(EngineState& state, std::size_t a, std::size_t pos) {
    auto& ps = state.proposers[a];
    ps.proposed[pos] = true;
    ++state.proposal_count;
    ++state.proposals_by_level[ps.level.code()];
    state.emit({EventKind::Propose, a, state.prefs.pref_s(a)[pos].b, ps.level});
}

void match(EngineState& state, std::size_t a, std::size_t b, bool uncertain) {
    auto& ps = state.proposers[a];
    ps.matched_to = b;
    state.partner_of_b[b] = a;
    state.level_of_b[b] = ps.level;
    state.uncertain[b] = uncertain;
    if (uncertain) {
        if (state.ever_uncertain[b])
            throw InvariantError("b" + std::to_string(b) + " took part in a second uncertain proposal");
        state.ever_uncertain[b] = true;
    }
    state.emit({EventKind::Accept, a, b, ps.level, uncertain});
}

// Drops b's current partner and puts it back on the queue. b is re-matched
// by the caller straight away, so B-vertices never go unmatched.
std::size_t displace(EngineState& state, std::size_t b) {
    std::size_t incumbent = *state.partner_of_b[b];
    auto& ps = state.proposers[incumbent];
    ps.matched_to.reset();
    state.queue.push_back({incumbent, ps.level});
    state.emit({EventKind::Displace, incumbent, b, ps.level});
    return incumbent;
}

void reject(EngineState& state, std::size_t a, std::size_t b) {
    const auto& ps = state.proposers[a];
    state.queue.push_back({a, ps.level});
    state.emit({EventKind::Reject, a, b, ps.level});
}

// Positions (into PrefS) that a may walk at its current strict-list level.
std::vector<std::size_t> strict_list(const EngineState& state, std::size_t a) {
    Level level = state.proposers[a].level;
    if (level < state.ties_level()) {
        auto sc = state.prefs.pref_sc_positions(a);
        return {sc.begin(), sc.end()};
    }
    if (level > state.star_level()) {
        std::vector<std::size_t> all(state.prefs.pref_s(a).size());
        for (std::size_t p = 0; p < all.size(); ++p) all[p] = p;
        return all;
    }
    throw std::logic_error("a" + std::to_string(a) + " is at a ties level, not a strict-list level");
}

bool strict_exhausted(const EngineState& state, std::size_t a) {
    const auto& ps = state.proposers[a];
    if (ps.level < state.ties_level()) return ps.cursor >= state.prefs.pref_sc_positions(a).size();
    return ps.cursor >= state.prefs.pref_s(a).size();
}

void require_unmatched(const EngineState& state, std::size_t a) {
    if (a >= state.proposers.size()) throw std::out_of_range("a" + std::to_string(a) + " out of range");
    if (state.proposers[a].matched_to)
        throw std::logic_error("a" + std::to_string(a) + " is matched and cannot propose");
}

}  // namespace

std::string to_string(const Event& e) {
    std::ostringstream out;
    out << kind_name(e.kind) << " a" << e.a;
    if (e.b) out << " b" << *e.b;
    out << " @" << critmatch::to_string(e.level);
    if (e.uncertain) out << " uncertain";
    return out.str();
}

EngineState::EngineState(Instance inst)
    : instance(std::move(inst)), prefs(instance), s(instance.s()), t(instance.t()) {
    proposers.resize(instance.n_a);
    for (std::size_t a = 0; a < instance.n_a; ++a) {
        auto deg = prefs.pref_s(a).size();
        proposers[a].proposed.assign(deg, false);
        proposers[a].marked.assign(deg, false);
        queue.push_back({a, Level::ordinary(0)});
    }
    partner_of_b.assign(instance.n_b, std::nullopt);
    level_of_b.assign(instance.n_b, Level{});
    uncertain.assign(instance.n_b, false);
    ever_uncertain.assign(instance.n_b, false);
    ever_marked.assign(instance.n_b, false);
}

std::uint64_t EngineState::proposal_bound() const {
    return static_cast<std::uint64_t>(s + t + 3) * instance.edges.size();
}

Winner prefers(const EngineState& state, std::size_t b, Suitor challenger, Suitor incumbent) {
    auto rc = state.prefs.rank_at_b(b, challenger.a);
    auto ri = state.prefs.rank_at_b(b, incumbent.a);
    if (!rc || !ri)
        throw std::invalid_argument("prefers: a" + std::to_string(rc ? incumbent.a : challenger.a) +
                                    " is not a neighbour of b" + std::to_string(b));
    if (state.in_ties_band(challenger.level) && state.in_ties_band(incumbent.level)) {
        if (*rc < *ri) return Winner::Challenger;
        if (*rc == *ri && challenger.level.is_star() && !incumbent.level.is_star())
            return Winner::Challenger;
        return Winner::Incumbent;
    }
    if (challenger.level != incumbent.level)
        return challenger.level > incumbent.level ? Winner::Challenger : Winner::Incumbent;
    return *rc < *ri ? Winner::Challenger : Winner::Incumbent;
}

void critical_propose(EngineState& state, std::size_t a) {
    require_unmatched(state, a);
    auto list = strict_list(state, a);
    auto& ps = state.proposers[a];
    if (ps.cursor >= list.size())
        throw std::logic_error("a" + std::to_string(a) + " has exhausted its list at level " +
                               critmatch::to_string(ps.level));
    std::size_t pos = list[ps.cursor++];
    std::size_t b = state.prefs.pref_s(a)[pos].b;
    note_proposal(state, a, pos);

    if (!state.partner_of_b[b]) {
        match(state, a, b, false);
        return;
    }
    Suitor incumbent{*state.partner_of_b[b], state.level_of_b[b]};
    if (prefers(state, b, {a, ps.level}, incumbent) == Winner::Challenger) {
        displace(state, b);
        match(state, a, b, false);
    } else {
        reject(state, a, b);
    }
}

std::optional<Favourite> favourite_neighbour(const EngineState& state, std::size_t a) {
    if (a >= state.proposers.size()) throw std::out_of_range("a" + std::to_string(a) + " out of range");
    const auto& ps = state.proposers[a];
    if (!state.in_ties_band(ps.level))
        throw std::logic_error("favourite_neighbour: a" + std::to_string(a) + " is not at level t or t*");
    auto list = state.prefs.pref_s(a);

    std::size_t begin = 0;
    while (begin < list.size()) {
        std::size_t end = begin;
        bool open = false;
        while (end < list.size() && list[end].rank == list[begin].rank) {
            open = open || !ps.proposed[end] || ps.marked[end];
            ++end;
        }
        if (!open) {
            begin = end;
            continue;
        }
        // Within a tie group PrefS is already in ascending index order.
        for (std::size_t p = begin; p < end; ++p)
            if (!state.partner_of_b[list[p].b] && !ps.proposed[p])
                return Favourite{list[p].b, p, list[p].rank, 1};
        for (std::size_t p = begin; p < end; ++p)
            if (!ps.proposed[p]) return Favourite{list[p].b, p, list[p].rank, 2};
        for (std::size_t p = begin; p < end; ++p)
            if (ps.marked[p]) return Favourite{list[p].b, p, list[p].rank, 3};
        begin = end;
    }
    return std::nullopt;
}

void ties_propose(EngineState& state, std::size_t a) {
    require_unmatched(state, a);
    auto fav = favourite_neighbour(state, a);
    if (!fav) throw std::logic_error("a" + std::to_string(a) + " has no favourite neighbour");
    auto& ps = state.proposers[a];
    const std::size_t b = fav->b;
    if (ps.marked[fav->position]) {
        ps.marked[fav->position] = false;
        --ps.marked_count;
        state.emit({EventKind::Unmark, a, b, ps.level});
    }
    note_proposal(state, a, fav->position);

    if (!state.partner_of_b[b]) {
        auto list = state.prefs.pref_s(a);
        bool uncertain = false;
        for (std::size_t p = 0; p < list.size() && !uncertain; ++p)
            uncertain = p != fav->position && list[p].rank == fav->rank &&
                        !state.partner_of_b[list[p].b] && !ps.proposed[p];
        match(state, a, b, uncertain);
        return;
    }

    if (state.uncertain[b]) {
        std::size_t loser = displace(state, b);
        auto& lps = state.proposers[loser];
        auto pos = state.prefs.position_at_a(loser, b);
        if (!pos) throw InvariantError("uncertain partner is not a neighbour");
        if (state.ever_marked[b]) throw InvariantError("b" + std::to_string(b) + " marked twice");
        state.ever_marked[b] = true;
        lps.marked[*pos] = true;
        ++lps.marked_count;
        state.emit({EventKind::Mark, loser, b, lps.level});
        match(state, a, b, false);
        return;
    }

    Suitor incumbent{*state.partner_of_b[b], state.level_of_b[b]};
    if (prefers(state, b, {a, ps.level}, incumbent) == Winner::Challenger) {
        displace(state, b);
        match(state, a, b, false);
    } else {
        reject(state, a, b);
    }
}

void advance_level(EngineState& state, std::size_t a) {
    require_unmatched(state, a);
    auto& ps = state.proposers[a];
    const Level from = ps.level;
    const bool critical = state.instance.critical_a[a];

    std::optional<Level> next;
    if (from < state.ties_level()) {
        if (!strict_exhausted(state, a))
            throw std::logic_error("advance_level: a" + std::to_string(a) + " still has PrefSC entries");
        next = Level::ordinary(from.bucket() + 1);
    } else if (state.in_ties_band(from)) {
        if (favourite_neighbour(state, a))
            throw std::logic_error("advance_level: a" + std::to_string(a) +
                                   " still has unproposed or marked neighbours");
        if (from == state.ties_level())
            next = state.star_level();
        else if (critical && state.s + state.t >= state.t + 1)
            next = Level::ordinary(state.t + 1);
    } else {
        if (!strict_exhausted(state, a))
            throw std::logic_error("advance_level: a" + std::to_string(a) + " still has PrefS entries");
        if (critical && from.bucket() < state.s + state.t) next = Level::ordinary(from.bucket() + 1);
    }

    std::fill(ps.proposed.begin(), ps.proposed.end(), false);
    std::fill(ps.marked.begin(), ps.marked.end(), false);
    ps.marked_count = 0;
    ps.cursor = 0;

    if (!next) {
        ps.retired = true;
        state.emit({EventKind::Retire, a, std::nullopt, from});
        return;
    }
    if (*next <= from) throw InvariantError("level of a" + std::to_string(a) + " did not increase");
    ps.level = *next;
    state.queue.push_back({a, ps.level});
    state.emit({EventKind::LevelUp, a, std::nullopt, ps.level});
}

bool step(EngineState& state) {
    if (state.queue.empty()) return false;
    Suitor item = state.queue.front();
    state.queue.pop_front();
    const auto& ps = state.proposers[item.a];
    if (ps.matched_to || ps.retired)
        throw InvariantError("queued a" + std::to_string(item.a) + " is not an active unmatched proposer");
    if (ps.level != item.level) throw InvariantError("queue entry level is stale");

    if (state.in_ties_band(ps.level)) {
        if (favourite_neighbour(state, item.a))
            ties_propose(state, item.a);
        else
            advance_level(state, item.a);
    } else if (strict_exhausted(state, item.a)) {
        advance_level(state, item.a);
    } else {
        critical_propose(state, item.a);
    }
    return true;
}

}  // namespace engine

SolveResult solve(const Instance& inst, engine::Observer observer) {
    auto check = validate(inst);
    if (!check.ok()) throw std::invalid_argument("invalid instance: " + check.violations.front());

    engine::EngineState state(inst);
    state.observer = std::move(observer);
    while (engine::step(state)) {
        if (state.proposal_count > state.proposal_bound())
            throw InvariantError("proposal count exceeded (s+t+3)|E|");
    }

    SolveResult result;
    for (std::size_t a = 0; a < inst.n_a; ++a) {
        const auto& ps = state.proposers[a];
        if (ps.matched_to) {
            auto b = *ps.matched_to;
            if (state.partner_of_b[b] != a) throw InvariantError("partner tables disagree");
            result.matching.pairs.push_back({a, b, state.level_of_b[b]});
        } else if (!ps.retired) {
            throw InvariantError("a" + std::to_string(a) + " left the queue while still active");
        }
        result.stats.final_level.push_back(ps.level);
        result.stats.retired.push_back(ps.retired);
    }
    result.stats.proposal_count = state.proposal_count;
    result.stats.proposal_bound = state.proposal_bound();
    result.stats.proposals_by_level = state.proposals_by_level;
    result.stats.s = state.s;
    result.stats.t = state.t;
    return result;
}

}  // namespace critmatch

#include "critmatch/verify.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace critmatch::verify {

namespace {

std::string pair_name(std::size_t a, std::size_t b) {
    return "(a" + std::to_string(a) + ", b" + std::to_string(b) + ")";
}

// Min-cost flow by successive shortest paths with Johnson potentials.
// Arc costs are negated weights, so the flow stops as soon as the next
// augmenting path would no longer increase total weight.
class MaxWeightMatcher {
public:
    MaxWeightMatcher(std::size_t n_a, std::size_t n_b)
        : n_a_(n_a), source_(n_a + n_b), sink_(n_a + n_b + 1), graph_(n_a + n_b + 2) {
        for (std::size_t a = 0; a < n_a; ++a) add_arc(source_, a, 0);
        for (std::size_t b = 0; b < n_b; ++b) add_arc(n_a + b, sink_, 0);
    }

    void add_edge(std::size_t a, std::size_t b, long long weight) { add_arc(a, n_a_ + b, -weight); }

    long long solve() {
        const auto n = graph_.size();
        std::vector<long long> pot(n, 0);
        // Exact distances in the initial layered graph.
        for (std::size_t a = 0; a < n_a_; ++a)
            for (const auto& arc : graph_[a])
                if (arc.cap > 0 && arc.to != source_) pot[arc.to] = std::min(pot[arc.to], arc.cost);
        for (std::size_t v = n_a_; v < source_; ++v) pot[sink_] = std::min(pot[sink_], pot[v]);

        long long total = 0;
        std::vector<long long> dist(n);
        std::vector<std::pair<std::size_t, std::size_t>> via(n);
        for (;;) {
            std::fill(dist.begin(), dist.end(), kInf);
            dist[source_] = 0;
            using Item = std::pair<long long, std::size_t>;
            std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
            heap.push({0, source_});
            while (!heap.empty()) {
                auto [d, u] = heap.top();
                heap.pop();
                if (d > dist[u]) continue;
                for (std::size_t i = 0; i < graph_[u].size(); ++i) {
                    const auto& arc = graph_[u][i];
                    if (arc.cap == 0) continue;
                    long long nd = d + arc.cost + pot[u] - pot[arc.to];
                    if (nd < dist[arc.to]) {
                        dist[arc.to] = nd;
                        via[arc.to] = {u, i};
                        heap.push({nd, arc.to});
                    }
                }
            }
            if (dist[sink_] == kInf) break;
            long long path_cost = dist[sink_] + pot[sink_] - pot[source_];
            if (path_cost >= 0) break;

            long long reach = 0;
            for (auto d : dist)
                if (d != kInf) reach = std::max(reach, d);
            for (std::size_t v = 0; v < n; ++v) pot[v] += dist[v] == kInf ? reach : dist[v];

            for (std::size_t v = sink_; v != source_;) {
                auto [u, i] = via[v];
                auto& arc = graph_[u][i];
                arc.cap -= 1;
                graph_[v][arc.rev].cap += 1;
                v = u;
            }
            total -= path_cost;
        }
        return total;
    }

private:
    static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

    struct Arc {
        std::size_t to;
        int cap;
        long long cost;
        std::size_t rev;
    };

    void add_arc(std::size_t from, std::size_t to, long long cost) {
        graph_[from].push_back({to, 1, cost, graph_[to].size()});
        graph_[to].push_back({from, 0, -cost, graph_[from].size() - 1});
    }

    std::size_t n_a_;
    std::size_t source_;
    std::size_t sink_;
    std::vector<std::vector<Arc>> graph_;
};

}  // namespace

Checker::Checker(const Instance& inst) : inst_(inst), arcs_(inst.n_a) {
    for (const auto& e : inst.edges)
        if (e.a < inst.n_a) arcs_[e.a].push_back({e.b, e.rank_a, e.rank_b});
    for (auto& list : arcs_)
        std::sort(list.begin(), list.end(), [](const Arc& x, const Arc& y) { return x.b < y.b; });
}

const Checker::Arc* Checker::find(std::size_t a, std::size_t b) const {
    if (a >= arcs_.size()) return nullptr;
    const auto& list = arcs_[a];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Arc& arc, std::size_t key) { return arc.b < key; });
    return it != list.end() && it->b == b ? &*it : nullptr;
}

std::optional<Rank> Checker::rank_at_a(std::size_t a, std::size_t b) const {
    const auto* arc = find(a, b);
    return arc ? std::optional<Rank>(arc->rank_a) : std::nullopt;
}

std::optional<Rank> Checker::rank_at_b(std::size_t a, std::size_t b) const {
    const auto* arc = find(a, b);
    return arc ? std::optional<Rank>(arc->rank_b) : std::nullopt;
}

void Checker::partners(const Matching& m, std::vector<std::optional<std::size_t>>& of_a,
                       std::vector<std::optional<std::size_t>>& of_b) const {
    of_a.assign(inst_.n_a, std::nullopt);
    of_b.assign(inst_.n_b, std::nullopt);
    for (auto [a, b] : m) {
        if (a >= inst_.n_a || b >= inst_.n_b)
            throw MatchingError("pair " + pair_name(a, b) + " references an unknown vertex");
        if (!find(a, b)) throw MatchingError("pair " + pair_name(a, b) + " is not an edge");
        if (of_a[a]) throw MatchingError("a" + std::to_string(a) + " is matched twice");
        if (of_b[b]) throw MatchingError("b" + std::to_string(b) + " is matched twice");
        of_a[a] = b;
        of_b[b] = a;
    }
}

void Checker::require_matching(const Matching& m) const {
    std::vector<std::optional<std::size_t>> of_a, of_b;
    partners(m, of_a, of_b);
}

bool Checker::is_matching(const Matching& m) const {
    try {
        require_matching(m);
        return true;
    } catch (const MatchingError&) {
        return false;
    }
}

std::vector<BlockingPair> Checker::blocking_pairs(const Matching& m) const {
    std::vector<std::optional<std::size_t>> of_a, of_b;
    partners(m, of_a, of_b);
    std::vector<BlockingPair> out;
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        for (const auto& arc : arcs_[a]) {
            const std::size_t b = arc.b;
            if (of_a[a] == b) continue;
            bool a_wants = !of_a[a] || arc.rank_a < find(a, *of_a[a])->rank_a;
            bool b_wants = !of_b[b] || arc.rank_b < find(*of_b[b], b)->rank_b;
            if (!a_wants || !b_wants) continue;
            out.push_back({a, b, of_a[a] && inst_.critical_b[*of_a[a]],
                           of_b[b] && inst_.critical_a[*of_b[b]]});
        }
    }
    return out;
}

RsmVerdict Checker::is_rsm(const Matching& m) const {
    RsmVerdict verdict;
    for (const auto& bp : blocking_pairs(m))
        if (!bp.justified()) verdict.unjustified.push_back(bp);
    verdict.is_rsm = verdict.unjustified.empty();
    return verdict;
}

CriticalCounts Checker::critical_counts(const Matching& m) const {
    require_matching(m);
    CriticalCounts counts;
    for (auto [a, b] : m) {
        counts.from_a += inst_.critical_a[a] ? 1 : 0;
        counts.from_b += inst_.critical_b[b] ? 1 : 0;
    }
    return counts;
}

std::vector<BlockingPair> blocking_pairs(const Instance& inst, const Matching& m) {
    return Checker(inst).blocking_pairs(m);
}

RsmVerdict is_rsm(const Instance& inst, const Matching& m) { return Checker(inst).is_rsm(m); }

CriticalCounts critical_counts(const Instance& inst, const Matching& m) {
    return Checker(inst).critical_counts(m);
}

std::size_t max_critical_coverage(const Instance& inst) {
    MaxWeightMatcher matcher(inst.n_a, inst.n_b);
    for (const auto& e : inst.edges) {
        long long w = (inst.critical_a[e.a] ? 1 : 0) + (inst.critical_b[e.b] ? 1 : 0);
        if (w > 0) matcher.add_edge(e.a, e.b, w);
    }
    return static_cast<std::size_t>(matcher.solve());
}

bool is_critical(const Instance& inst, const Matching& m) {
    return critical_counts(inst, m).total() == max_critical_coverage(inst);
}

LevelPartition build_level_partition(const Instance& inst, const LeveledMatching& lm) {
    LevelPartition part;
    part.s = inst.s();
    part.t = inst.t();
    part.a_part.assign(inst.n_a, 0);
    part.b_part.assign(inst.n_b, 0);
    std::vector<bool> a_matched(inst.n_a, false), b_matched(inst.n_b, false);
    for (const auto& p : lm.pairs) {
        if (p.a >= inst.n_a || p.b >= inst.n_b)
            throw MatchingError("pair " + pair_name(p.a, p.b) + " references an unknown vertex");
        part.a_part[p.a] = part.b_part[p.b] = p.level.bucket();
        a_matched[p.a] = b_matched[p.b] = true;
    }
    for (std::size_t a = 0; a < inst.n_a; ++a)
        if (!a_matched[a]) part.a_part[a] = inst.critical_a[a] ? part.s + part.t : part.t;
    for (std::size_t b = 0; b < inst.n_b; ++b)
        if (!b_matched[b]) part.b_part[b] = inst.critical_b[b] ? 0 : part.t;
    return part;
}

StructureReport check_structure(const Instance& inst, const LeveledMatching& lm) {
    Checker checker(inst);
    const Matching plain = lm.plain();
    checker.require_matching(plain);
    const auto part = build_level_partition(inst, lm);
    const std::size_t s = part.s, t = part.t;

    std::vector<std::optional<std::size_t>> of_a(inst.n_a), of_b(inst.n_b);
    for (auto [a, b] : plain) {
        of_a[a] = b;
        of_b[b] = a;
    }
    std::vector<std::vector<std::size_t>> nbr_a(inst.n_a), nbr_b(inst.n_b);
    for (const auto& e : inst.edges) {
        nbr_a[e.a].push_back(e.b);
        nbr_b[e.b].push_back(e.a);
    }

    StructureReport report;
    auto& p1 = report.property1_violations;
    for (std::size_t a = 0; a < inst.n_a; ++a) {
        const auto x = part.a_part[a];
        if (x > t && !inst.critical_a[a])
            p1.push_back("item 1: non-critical a" + std::to_string(a) + " in bucket " + std::to_string(x));
        if (of_a[a]) continue;
        for (auto b : nbr_a[a]) {
            if (inst.critical_a[a]) {
                if (!of_b[b] || part.b_part[b] != s + t)
                    p1.push_back("item 3: unmatched critical a" + std::to_string(a) + " has neighbour b" +
                                 std::to_string(b) + (of_b[b] ? " in bucket " + std::to_string(part.b_part[b])
                                                               : " unmatched"));
            } else if (!of_b[b] || part.b_part[b] < t) {
                p1.push_back("item 4: unmatched a" + std::to_string(a) + " has neighbour b" +
                             std::to_string(b) +
                             (of_b[b] ? " in bucket " + std::to_string(part.b_part[b]) : " unmatched"));
            }
        }
    }
    for (std::size_t b = 0; b < inst.n_b; ++b) {
        const auto y = part.b_part[b];
        if (y < t && !inst.critical_b[b])
            p1.push_back("item 2: non-critical b" + std::to_string(b) + " in bucket " + std::to_string(y));
        if (of_b[b]) continue;
        for (auto a : nbr_b[b]) {
            if (inst.critical_b[b] ? part.a_part[a] != 0 : part.a_part[a] > t)
                p1.push_back(std::string(inst.critical_b[b] ? "item 5" : "item 6") + ": unmatched b" +
                             std::to_string(b) + " has neighbour a" + std::to_string(a) + " in bucket " +
                             std::to_string(part.a_part[a]));
        }
    }

    for (const auto& e : inst.edges) {
        const auto x = part.a_part[e.a], y = part.b_part[e.b];
        if (x > y + 1) report.steep_downward_edges.push_back({e.a, e.b, x, y});
    }
    for (const auto& bp : checker.blocking_pairs(plain)) {
        const auto x = part.a_part[bp.a], y = part.b_part[bp.b];
        if (!(x < y)) report.non_upward_blocking_pairs.push_back({bp.a, bp.b, x, y});
    }
    return report;
}

VerificationReport make_report(const Instance& inst, const Matching& m) {
    VerificationReport report;
    Checker checker(inst);
    try {
        checker.require_matching(m);
    } catch (const MatchingError& e) {
        report.matching_error = e.what();
        return report;
    }
    report.is_matching = true;
    report.blocking_pairs = checker.blocking_pairs(m);
    for (const auto& bp : report.blocking_pairs)
        if (!bp.justified()) report.unjustified.push_back(bp);
    report.is_rsm = report.unjustified.empty();
    report.critical_covered = checker.critical_counts(m).total();
    report.max_critical_coverage = max_critical_coverage(inst);
    report.is_critical = report.critical_covered == report.max_critical_coverage;
    return report;
}

VerificationReport make_report(const Instance& inst, const LeveledMatching& lm) {
    auto report = make_report(inst, lm.plain());
    if (report.is_matching) report.structure = check_structure(inst, lm);
    return report;
}

nlohmann::json to_json(const BlockingPair& bp) {
    return {{"a", bp.a}, {"b", bp.b}, {"justified_by_a", bp.justified_by_a},
            {"justified_by_b", bp.justified_by_b}};
}

nlohmann::json to_json(const StructureReport& r) {
    auto witnesses = [](const std::vector<EdgeWitness>& list) {
        auto out = nlohmann::json::array();
        for (const auto& w : list)
            out.push_back({{"a", w.a}, {"b", w.b}, {"bucket_a", w.bucket_a}, {"bucket_b", w.bucket_b}});
        return out;
    };
    return {{"ok", r.ok()},
            {"property1_violations", r.property1_violations},
            {"steep_downward_edges", witnesses(r.steep_downward_edges)},
            {"non_upward_blocking_pairs", witnesses(r.non_upward_blocking_pairs)}};
}

nlohmann::json to_json(const VerificationReport& r) {
    auto pairs = [](const std::vector<BlockingPair>& list) {
        auto out = nlohmann::json::array();
        for (const auto& bp : list) out.push_back(to_json(bp));
        return out;
    };
    nlohmann::json j{{"is_matching", r.is_matching},
                     {"blocking_pairs", pairs(r.blocking_pairs)},
                     {"unjustified", pairs(r.unjustified)},
                     {"is_rsm", r.is_rsm},
                     {"critical_covered", r.critical_covered},
                     {"max_critical_coverage", r.max_critical_coverage},
                     {"is_critical", r.is_critical},
                     {"structure_report", r.structure ? to_json(*r.structure) : nlohmann::json()}};
    if (!r.is_matching) j["matching_error"] = r.matching_error;
    return j;
}

Matching parse_matching(std::string_view text) {
    Matching m;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string key;
        if (!(fields >> key)) continue;
        std::string a_tok, b_tok, extra;
        if (key != "pair" || !(fields >> a_tok >> b_tok) || (fields >> extra))
            throw ParseError("expected 'pair <a> <b>'", line_no);
        auto number = [&](const std::string& tok) {
            std::size_t v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                throw ParseError("expected non-negative integer, got '" + tok + "'", line_no);
            return v;
        };
        m.emplace_back(number(a_tok), number(b_tok));
    }
    return m;
}

std::string serialize_matching(const Matching& m) {
    std::ostringstream out;
    for (auto [a, b] : m) out << "pair " << a << ' ' << b << '\n';
    return out.str();
}

}  // namespace critmatch::verify

#include "critmatch/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace critmatch {

namespace {

std::string edge_name(std::size_t a, std::size_t b) {
    return "(a" + std::to_string(a) + ", b" + std::to_string(b) + ")";
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string_view strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::size_t parse_index(std::string_view tok, std::size_t line, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("expected non-negative integer for " + std::string(what) + ", got '" +
                             std::string(tok) + "'",
                         line);
    return value;
}

Rank parse_rank(std::string_view tok, std::size_t line) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError("expected integer rank, got '" + std::string(tok) + "'", line);
    if (value < 1) throw ParseError("rank < 1", line);
    return static_cast<Rank>(value);
}

// Duplicate detection shared by both readers so the error names the line.
class EdgeSet {
public:
    bool insert(std::size_t a, std::size_t b) { return seen_.emplace(a, b).second; }

private:
    std::set<std::pair<std::size_t, std::size_t>> seen_;
};

void check_or_throw(const Instance& inst) {
    auto result = validate(inst);
    if (!result.ok()) throw ParseError(result.violations.front());
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::size_t Instance::s() const {
    return static_cast<std::size_t>(std::count(critical_a.begin(), critical_a.end(), true));
}

std::size_t Instance::t() const {
    return static_cast<std::size_t>(std::count(critical_b.begin(), critical_b.end(), true));
}

bool Instance::is_critical(VertexRef v) const {
    const auto& flags = v.side == Side::A ? critical_a : critical_b;
    return v.index < flags.size() && flags[v.index];
}

std::string to_string(VertexRef v) {
    return (v.side == Side::A ? "a" : "b") + std::to_string(v.index);
}

ValidationResult validate(const Instance& inst) {
    ValidationResult out;
    auto& v = out.violations;
    if (inst.critical_a.size() != inst.n_a)
        v.push_back("critical_a has " + std::to_string(inst.critical_a.size()) +
                    " flags, expected " + std::to_string(inst.n_a));
    if (inst.critical_b.size() != inst.n_b)
        v.push_back("critical_b has " + std::to_string(inst.critical_b.size()) +
                    " flags, expected " + std::to_string(inst.n_b));
    EdgeSet seen;
    for (const auto& e : inst.edges) {
        if (e.a >= inst.n_a) v.push_back("index out of range: a" + std::to_string(e.a));
        if (e.b >= inst.n_b) v.push_back("index out of range: b" + std::to_string(e.b));
        if (e.rank_a < 1 || e.rank_b < 1) v.push_back("rank < 1 on edge " + edge_name(e.a, e.b));
        if (!seen.insert(e.a, e.b)) v.push_back("duplicate edge " + edge_name(e.a, e.b));
    }
    return out;
}

Instance parse_instance(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '#') {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos < text.size() && text[pos] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text.substr(pos));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what());
        }
        return instance_from_json(j);
    }
    return parse_instance_text(text);
}

Instance parse_instance_text(std::string_view text) {
    enum class Expect { Header, CriticalA, CriticalB, Edges };
    Expect expect = Expect::Header;
    Instance inst;
    EdgeSet seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    auto read_critical = [&](const std::vector<std::string_view>& toks, std::vector<bool>& flags,
                             std::size_t n, const char* key) {
        if (toks.front() != key)
            throw ParseError("expected '" + std::string(key) + "' line", line_no);
        for (std::size_t i = 1; i < toks.size(); ++i) {
            auto idx = parse_index(toks[i], line_no, key);
            if (idx >= n)
                throw ParseError("index out of range in " + std::string(key) + ": " +
                                     std::to_string(idx),
                                 line_no);
            if (flags[idx])
                throw ParseError("duplicate index in " + std::string(key) + ": " +
                                     std::to_string(idx),
                                 line_no);
            flags[idx] = true;
        }
    };

    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        auto toks = split_tokens(strip_comment(raw));
        if (toks.empty()) continue;

        switch (expect) {
        case Expect::Header: {
            if (toks.front() != "instance" || toks.size() != 3)
                throw ParseError("expected 'instance <n_a> <n_b>'", line_no);
            inst = Instance(parse_index(toks[1], line_no, "n_a"), parse_index(toks[2], line_no, "n_b"));
            expect = Expect::CriticalA;
            break;
        }
        case Expect::CriticalA:
            read_critical(toks, inst.critical_a, inst.n_a, "critical_a");
            expect = Expect::CriticalB;
            break;
        case Expect::CriticalB:
            read_critical(toks, inst.critical_b, inst.n_b, "critical_b");
            expect = Expect::Edges;
            break;
        case Expect::Edges: {
            if (toks.front() != "edge") throw ParseError("expected 'edge' line", line_no);
            if (toks.size() == 4)
                throw ParseError("asymmetric edge declaration: both ranks are required", line_no);
            if (toks.size() != 5)
                throw ParseError("expected 'edge <a> <b> <rank_at_a> <rank_at_b>'", line_no);
            Edge e{parse_index(toks[1], line_no, "a"), parse_index(toks[2], line_no, "b"),
                   parse_rank(toks[3], line_no), parse_rank(toks[4], line_no)};
            if (e.a >= inst.n_a)
                throw ParseError("index out of range: a" + std::to_string(e.a), line_no);
            if (e.b >= inst.n_b)
                throw ParseError("index out of range: b" + std::to_string(e.b), line_no);
            if (!seen.insert(e.a, e.b))
                throw ParseError("duplicate edge " + edge_name(e.a, e.b), line_no);
            inst.edges.push_back(e);
            break;
        }
        }
    }
    if (expect != Expect::Edges)
        throw ParseError("truncated instance: header and both critical lines are required");
    check_or_throw(inst);
    return inst;
}

Instance instance_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw ParseError("instance JSON must be an object");
        Instance inst(j.at("n_a").get<std::size_t>(), j.at("n_b").get<std::size_t>());
        auto read_critical = [&](const char* key, std::vector<bool>& flags) {
            if (!j.contains(key)) return;
            for (const auto& v : j.at(key)) {
                auto idx = v.get<std::size_t>();
                if (idx >= flags.size())
                    throw ParseError("index out of range in " + std::string(key) + ": " +
                                     std::to_string(idx));
                if (flags[idx])
                    throw ParseError("duplicate index in " + std::string(key) + ": " +
                                     std::to_string(idx));
                flags[idx] = true;
            }
        };
        read_critical("critical_a", inst.critical_a);
        read_critical("critical_b", inst.critical_b);
        EdgeSet seen;
        if (j.contains("edges")) {
            for (const auto& je : j.at("edges")) {
                long long a = 0, b = 0, ra = 0, rb = 0;
                if (je.is_array()) {
                    if (je.size() == 3)
                        throw ParseError("asymmetric edge declaration: both ranks are required");
                    if (je.size() != 4) throw ParseError("edge array must be [a, b, rank_a, rank_b]");
                    a = je[0].get<long long>();
                    b = je[1].get<long long>();
                    ra = je[2].get<long long>();
                    rb = je[3].get<long long>();
                } else {
                    if (je.contains("rank_a") != je.contains("rank_b"))
                        throw ParseError("asymmetric edge declaration: both ranks are required");
                    a = je.at("a").get<long long>();
                    b = je.at("b").get<long long>();
                    ra = je.at("rank_a").get<long long>();
                    rb = je.at("rank_b").get<long long>();
                }
                if (a < 0 || static_cast<std::size_t>(a) >= inst.n_a)
                    throw ParseError("index out of range: a" + std::to_string(a));
                if (b < 0 || static_cast<std::size_t>(b) >= inst.n_b)
                    throw ParseError("index out of range: b" + std::to_string(b));
                if (ra < 1 || rb < 1) throw ParseError("rank < 1");
                Edge e{static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                       static_cast<Rank>(ra), static_cast<Rank>(rb)};
                if (!seen.insert(e.a, e.b)) throw ParseError("duplicate edge " + edge_name(e.a, e.b));
                inst.edges.push_back(e);
            }
        }
        check_or_throw(inst);
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed instance JSON: ") + e.what());
    }
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "instance " << inst.n_a << ' ' << inst.n_b << '\n';
    auto write_critical = [&](const char* key, const std::vector<bool>& flags) {
        out << key;
        for (std::size_t i = 0; i < flags.size(); ++i)
            if (flags[i]) out << ' ' << i;
        out << '\n';
    };
    write_critical("critical_a", inst.critical_a);
    write_critical("critical_b", inst.critical_b);
    for (const auto& e : inst.edges)
        out << "edge " << e.a << ' ' << e.b << ' ' << e.rank_a << ' ' << e.rank_b << '\n';
    return out.str();
}

nlohmann::json instance_to_json(const Instance& inst) {
    auto indices = [](const std::vector<bool>& flags) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < flags.size(); ++i)
            if (flags[i]) out.push_back(i);
        return out;
    };
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : inst.edges)
        edges.push_back({{"a", e.a}, {"b", e.b}, {"rank_a", e.rank_a}, {"rank_b", e.rank_b}});
    return {{"n_a", inst.n_a},
            {"n_b", inst.n_b},
            {"critical_a", indices(inst.critical_a)},
            {"critical_b", indices(inst.critical_b)},
            {"edges", std::move(edges)}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PreferenceList preference_list(const Instance& inst, VertexRef owner) {
    std::size_t limit = owner.side == Side::A ? inst.n_a : inst.n_b;
    if (owner.index >= limit) throw std::out_of_range("vertex " + to_string(owner) + " out of range");
    std::map<Rank, std::vector<std::size_t>> by_rank;
    for (const auto& e : inst.edges) {
        if (owner.side == Side::A && e.a == owner.index) by_rank[e.rank_a].push_back(e.b);
        if (owner.side == Side::B && e.b == owner.index) by_rank[e.rank_b].push_back(e.a);
    }
    PreferenceList list{owner, {}};
    for (auto& [rank, members] : by_rank) {
        std::sort(members.begin(), members.end());
        list.groups.push_back({rank, std::move(members)});
    }
    return list;
}

StrictList derive_pref_s(const Instance& inst, std::size_t a) {
    auto pref = preference_list(inst, {Side::A, a});
    StrictList out{pref.owner, StrictVariant::PrefS, {}};
    for (const auto& g : pref.groups) out.order.insert(out.order.end(), g.members.begin(), g.members.end());
    return out;
}

StrictList derive_pref_sc(const Instance& inst, std::size_t a) {
    auto out = derive_pref_s(inst, a);
    out.variant = StrictVariant::PrefSC;
    std::erase_if(out.order, [&](std::size_t b) { return !inst.critical_b[b]; });
    return out;
}

PreferenceIndex::PreferenceIndex(const Instance& inst) {
    a_start_.assign(inst.n_a + 1, 0);
    b_start_.assign(inst.n_b + 1, 0);
    for (const auto& e : inst.edges) {
        ++a_start_[e.a + 1];
        ++b_start_[e.b + 1];
    }
    for (std::size_t i = 0; i < inst.n_a; ++i) a_start_[i + 1] += a_start_[i];
    for (std::size_t i = 0; i < inst.n_b; ++i) b_start_[i + 1] += b_start_[i];

    a_entries_.resize(inst.edges.size());
    b_entries_.resize(inst.edges.size());
    auto a_fill = a_start_;
    auto b_fill = b_start_;
    for (const auto& e : inst.edges) {
        a_entries_[a_fill[e.a]++] = {e.b, e.rank_a};
        b_entries_[b_fill[e.b]++] = {e.a, e.rank_b};
    }
    sc_start_.assign(inst.n_a + 1, 0);
    for (std::size_t a = 0; a < inst.n_a; ++a) {
        auto first = a_entries_.begin() + static_cast<std::ptrdiff_t>(a_start_[a]);
        auto last = a_entries_.begin() + static_cast<std::ptrdiff_t>(a_start_[a + 1]);
        std::sort(first, last, [](const Entry& x, const Entry& y) {
            return x.rank != y.rank ? x.rank < y.rank : x.b < y.b;
        });
        for (std::size_t p = 0; p < a_start_[a + 1] - a_start_[a]; ++p)
            if (inst.critical_b[a_entries_[a_start_[a] + p].b]) sc_positions_.push_back(p);
        sc_start_[a + 1] = sc_positions_.size();
    }
    for (std::size_t b = 0; b < inst.n_b; ++b)
        std::sort(b_entries_.begin() + static_cast<std::ptrdiff_t>(b_start_[b]),
                  b_entries_.begin() + static_cast<std::ptrdiff_t>(b_start_[b + 1]));
}

std::span<const PreferenceIndex::Entry> PreferenceIndex::pref_s(std::size_t a) const {
    return {a_entries_.data() + a_start_.at(a), a_start_.at(a + 1) - a_start_[a]};
}

std::span<const std::size_t> PreferenceIndex::pref_sc_positions(std::size_t a) const {
    return {sc_positions_.data() + sc_start_.at(a), sc_start_.at(a + 1) - sc_start_[a]};
}

std::optional<Rank> PreferenceIndex::rank_at_b(std::size_t b, std::size_t a) const {
    auto first = b_entries_.begin() + static_cast<std::ptrdiff_t>(b_start_.at(b));
    auto last = b_entries_.begin() + static_cast<std::ptrdiff_t>(b_start_.at(b + 1));
    auto it = std::lower_bound(first, last, a, [](const auto& entry, std::size_t key) {
        return entry.first < key;
    });
    if (it == last || it->first != a) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> PreferenceIndex::position_at_a(std::size_t a, std::size_t b) const {
    auto list = pref_s(a);
    for (std::size_t p = 0; p < list.size(); ++p)
        if (list[p].b == b) return p;
    return std::nullopt;
}

}  // namespace critmatch

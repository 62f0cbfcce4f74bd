#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace critmatch {

enum class Side { A, B };

struct VertexRef {
    Side side = Side::A;
    std::size_t index = 0;

    friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

using Rank = std::uint64_t;

/// One acceptable pair, declared once with the rank each endpoint assigns.
struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    Rank rank_a = 1;
    Rank rank_b = 1;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Bipartite instance with tie-structured preferences and critical flags on
/// both sides. Plain data; run validate() (or build through parse_instance)
/// before handing it to the solver.
struct Instance {
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::vector<Edge> edges;
    std::vector<bool> critical_a;
    std::vector<bool> critical_b;

    Instance() = default;
    Instance(std::size_t num_a, std::size_t num_b)
        : n_a(num_a), n_b(num_b), critical_a(num_a, false), critical_b(num_b, false) {}

    /// Number of critical A-vertices.
    std::size_t s() const;
    /// Number of critical B-vertices.
    std::size_t t() const;

    bool is_critical(VertexRef v) const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// A plain matching: list of (a, b) pairs. Whether it really is a matching
/// over an instance is checked by the consumers that care.
using Matching = std::vector<std::pair<std::size_t, std::size_t>>;

struct TieGroup {
    Rank rank = 1;
    std::vector<std::size_t> members;  // ascending index
};

struct PreferenceList {
    VertexRef owner;
    std::vector<TieGroup> groups;  // strictly increasing rank
};

enum class StrictVariant { PrefS, PrefSC };

struct StrictList {
    VertexRef owner;
    StrictVariant variant = StrictVariant::PrefS;
    std::vector<std::size_t> order;
};

/// Raised when instance text cannot be read or the result fails validation.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct ValidationResult {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

ValidationResult validate(const Instance& inst);

/// Parses either the line-oriented format or the JSON object form. The
/// format is chosen by the first non-comment character ('{' means JSON).
Instance parse_instance(std::string_view text);
Instance parse_instance_text(std::string_view text);
Instance instance_from_json(const nlohmann::json& j);

std::string serialize_instance(const Instance& inst);
nlohmann::json instance_to_json(const Instance& inst);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::string& path);

PreferenceList preference_list(const Instance& inst, VertexRef owner);
StrictList derive_pref_s(const Instance& inst, std::size_t a);
StrictList derive_pref_sc(const Instance& inst, std::size_t a);

/// Precomputed adjacency for a validated instance. A-side lists are stored
/// in PrefS order (rank, then index) so tie groups are contiguous runs.
class PreferenceIndex {
public:
    struct Entry {
        std::size_t b;
        Rank rank;
    };

    explicit PreferenceIndex(const Instance& inst);

    std::span<const Entry> pref_s(std::size_t a) const;
    /// Positions into pref_s(a) of the critical neighbours, in PrefS order.
    std::span<const std::size_t> pref_sc_positions(std::size_t a) const;
    /// Rank b assigns to a, or nullopt when (a, b) is not an edge.
    std::optional<Rank> rank_at_b(std::size_t b, std::size_t a) const;
    std::optional<std::size_t> position_at_a(std::size_t a, std::size_t b) const;

    std::size_t n_a() const { return a_start_.size() - 1; }
    std::size_t n_b() const { return b_start_.size() - 1; }

private:
    std::vector<std::size_t> a_start_;
    std::vector<Entry> a_entries_;
    std::vector<std::size_t> sc_start_;
    std::vector<std::size_t> sc_positions_;
    std::vector<std::size_t> b_start_;
    std::vector<std::pair<std::size_t, Rank>> b_entries_;  // sorted by a
};

std::string to_string(VertexRef v);

}  // namespace critmatch

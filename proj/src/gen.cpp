#include "critmatch/gen.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace critmatch::gen {

namespace {

enum class Purpose : std::uint32_t { Lists = 1, Critical = 2 };

std::mt19937_64 substream(std::uint64_t seed, Side side, std::size_t index, Purpose purpose) {
    auto idx = static_cast<std::uint64_t>(index);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      side == Side::A ? 0x41u : 0x42u, static_cast<std::uint32_t>(idx),
                      static_cast<std::uint32_t>(idx >> 32), static_cast<std::uint32_t>(purpose)};
    return std::mt19937_64(seq);
}

// Top 53 bits as a double in [0, 1); identical on every standard library,
// unlike std::uniform_real_distribution.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Draw {
    std::size_t other;
    double priority;
    double tie;
};

// Orders the drawn entries by priority and merges neighbours into ties.
std::vector<Rank> assign_ranks(std::vector<Draw>& entries, double tie_density) {
    std::sort(entries.begin(), entries.end(), [](const Draw& x, const Draw& y) {
        return x.priority != y.priority ? x.priority < y.priority : x.other < y.other;
    });
    std::vector<Rank> ranks(entries.size());
    Rank rank = 1;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && !(entries[i].tie < tie_density)) ++rank;
        ranks[i] = rank;
    }
    return ranks;
}

}  // namespace

std::vector<std::string> check_params(const GenParams& p) {
    std::vector<std::string> out;
    auto in_unit = [&](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) out.push_back(std::string(name) + " must lie in [0, 1]");
    };
    in_unit(p.edge_probability, "edge_probability");
    in_unit(p.tie_density, "tie_density");
    in_unit(p.critical_fraction_a, "critical_fraction_a");
    in_unit(p.critical_fraction_b, "critical_fraction_b");
    return out;
}

Instance random_instance(const GenParams& p) {
    if (auto problems = check_params(p); !problems.empty()) throw std::invalid_argument(problems.front());

    Instance inst(p.n_a, p.n_b);
    for (std::size_t a = 0; a < p.n_a; ++a) {
        auto rng = substream(p.seed, Side::A, a, Purpose::Critical);
        inst.critical_a[a] = unit(rng) < p.critical_fraction_a;
    }
    for (std::size_t b = 0; b < p.n_b; ++b) {
        auto rng = substream(p.seed, Side::B, b, Purpose::Critical);
        inst.critical_b[b] = unit(rng) < p.critical_fraction_b;
    }

    // A-side streams decide which edges exist and how A ranks them.
    std::vector<std::vector<Draw>> a_lists(p.n_a);
    for (std::size_t a = 0; a < p.n_a; ++a) {
        auto rng = substream(p.seed, Side::A, a, Purpose::Lists);
        for (std::size_t b = 0; b < p.n_b; ++b) {
            double present = unit(rng), priority = unit(rng), tie = unit(rng);
            if (present < p.edge_probability) a_lists[a].push_back({b, priority, tie});
        }
    }
    std::vector<std::vector<std::pair<double, double>>> b_draws(p.n_b);
    for (std::size_t b = 0; b < p.n_b; ++b) {
        auto rng = substream(p.seed, Side::B, b, Purpose::Lists);
        b_draws[b].resize(p.n_a);
        for (auto& d : b_draws[b]) {
            d.first = unit(rng);
            d.second = unit(rng);
        }
    }
    std::vector<std::vector<Draw>> b_lists(p.n_b);
    for (std::size_t a = 0; a < p.n_a; ++a)
        for (const auto& entry : a_lists[a]) {
            const auto& d = b_draws[entry.other][a];
            b_lists[entry.other].push_back({a, d.first, d.second});
        }

    // rank_b[b][a], filled from B's ordering.
    std::vector<std::vector<std::pair<std::size_t, Rank>>> rank_b(p.n_b);
    for (std::size_t b = 0; b < p.n_b; ++b) {
        auto ranks = assign_ranks(b_lists[b], p.tie_density);
        for (std::size_t i = 0; i < ranks.size(); ++i) rank_b[b].emplace_back(b_lists[b][i].other, ranks[i]);
        std::sort(rank_b[b].begin(), rank_b[b].end());
    }
    for (std::size_t a = 0; a < p.n_a; ++a) {
        auto ranks = assign_ranks(a_lists[a], p.tie_density);
        std::vector<Edge> row;
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            std::size_t b = a_lists[a][i].other;
            auto it = std::lower_bound(rank_b[b].begin(), rank_b[b].end(), std::make_pair(a, Rank{0}));
            row.push_back({a, b, ranks[i], it->second});
        }
        std::sort(row.begin(), row.end(), [](const Edge& x, const Edge& y) { return x.b < y.b; });
        inst.edges.insert(inst.edges.end(), row.begin(), row.end());
    }
    return inst;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 0x5eedu};
    std::mt19937_64 rng(seq);
    return rng();
}

GenParams params_from_json(const nlohmann::json& j) {
    GenParams p;
    p.n_a = j.value("n_a", p.n_a);
    p.n_b = j.value("n_b", p.n_b);
    p.edge_probability = j.value("edge_probability", p.edge_probability);
    p.tie_density = j.value("tie_density", p.tie_density);
    p.critical_fraction_a = j.value("critical_fraction_a", p.critical_fraction_a);
    p.critical_fraction_b = j.value("critical_fraction_b", p.critical_fraction_b);
    p.seed = j.value("seed", p.seed);
    if (auto problems = check_params(p); !problems.empty()) throw std::invalid_argument(problems.front());
    return p;
}

nlohmann::json params_to_json(const GenParams& p) {
    return {{"n_a", p.n_a},
            {"n_b", p.n_b},
            {"edge_probability", p.edge_probability},
            {"tie_density", p.tie_density},
            {"critical_fraction_a", p.critical_fraction_a},
            {"critical_fraction_b", p.critical_fraction_b},
            {"seed", p.seed}};
}

}  // namespace critmatch::gen

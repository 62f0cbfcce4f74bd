#include "critmatch/report.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace critmatch {

nlohmann::json to_json(const LeveledMatching& lm) {
    auto out = nlohmann::json::array();
    for (const auto& p : lm.pairs)
        out.push_back({{"a", p.a}, {"b", p.b}, {"level", to_string(p.level)}, {"level_code", p.level.code()}});
    return out;
}

nlohmann::json to_json(const RunStats& stats) {
    nlohmann::json histogram = nlohmann::json::object();
    for (auto [code, count] : stats.proposals_by_level)
        histogram[to_string(Level::from_code(code))] = count;
    auto levels = nlohmann::json::array();
    for (auto l : stats.final_level) levels.push_back(to_string(l));
    return {{"proposal_count", stats.proposal_count},
            {"proposal_bound", stats.proposal_bound},
            {"proposals_by_level", std::move(histogram)},
            {"final_level", std::move(levels)},
            {"retired", stats.retired},
            {"s", stats.s},
            {"t", stats.t}};
}

nlohmann::json to_json(const SolveResult& result) {
    return {{"size", result.matching.size()},
            {"matching", to_json(result.matching)},
            {"stats", to_json(result.stats)}};
}

std::string format_text(const SolveResult& result) {
    std::ostringstream out;
    const auto& st = result.stats;
    out << "# size " << result.matching.size() << '\n'
        << "# s " << st.s << " t " << st.t << '\n'
        << "# proposals " << st.proposal_count << " (bound " << st.proposal_bound << ")\n"
        << "# proposals by level:";
    for (auto [code, count] : st.proposals_by_level) out << ' ' << to_string(Level::from_code(code)) << '=' << count;
    out << "\n# final levels:";
    for (std::size_t a = 0; a < st.final_level.size(); ++a)
        out << " a" << a << '=' << to_string(st.final_level[a]) << (st.retired[a] ? "(retired)" : "");
    out << '\n';
    for (const auto& p : result.matching.pairs)
        out << "pair " << p.a << ' ' << p.b << "  # level " << to_string(p.level) << '\n';
    return out.str();
}

}  // namespace critmatch

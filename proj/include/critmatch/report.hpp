#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "critmatch/engine.hpp"

namespace critmatch {

nlohmann::json to_json(const LeveledMatching& lm);
nlohmann::json to_json(const RunStats& stats);
nlohmann::json to_json(const SolveResult& result);

/// `pair <a> <b>  # level <l>` lines preceded by statistics as comments, so
/// the output doubles as a matching file.
std::string format_text(const SolveResult& result);

}  // namespace critmatch

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "critmatch/model.hpp"

namespace critmatch::gen {

struct GenParams {
    std::size_t n_a = 5;
    std::size_t n_b = 5;
    double edge_probability = 0.5;
    /// Chance that a list entry shares the rank of the entry before it.
    double tie_density = 0.0;
    double critical_fraction_a = 0.0;
    double critical_fraction_b = 0.0;
    std::uint64_t seed = 0;
};

/// Empty when the parameters are usable.
std::vector<std::string> check_params(const GenParams& p);

/// Deterministic in (params, seed). Every vertex draws from its own
/// substream keyed by (seed, side, index), so growing one side leaves the
/// other vertices' draws untouched. Throws std::invalid_argument on bad params.
Instance random_instance(const GenParams& p);

/// Derives the seed of the i-th instance of a batch from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i);

GenParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const GenParams& p);

}  // namespace critmatch::gen

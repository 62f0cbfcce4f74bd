#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "critmatch/gen.hpp"

namespace critmatch::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kInputError = 2,
    kInvariantBreach = 3,
};

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ExperimentRow {
    std::uint64_t seed = 0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    std::size_t s = 0;
    std::size_t t = 0;
    std::size_t solver_size = 0;
    std::optional<std::size_t> oracle_max_size;
    bool is_rsm = false;
    bool is_critical = false;
    bool structure_ok = false;
    std::size_t blocking_pairs = 0;
    std::uint64_t proposal_count = 0;
    std::optional<double> elapsed_ms;

    /// "p/q" in lowest terms; empty when the oracle did not run.
    std::string ratio() const;
    /// False when the row evidences a broken guarantee.
    bool sound() const;
};

std::string csv_header();
std::string to_csv(const ExperimentRow& row);

ExperimentRow run_experiment(const gen::GenParams& params, std::size_t oracle_max, bool timing);

}  // namespace critmatch::cli

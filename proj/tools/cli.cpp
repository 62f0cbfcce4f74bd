#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "critmatch/engine.hpp"
#include "critmatch/model.hpp"
#include "critmatch/oracle.hpp"
#include "critmatch/report.hpp"
#include "critmatch/verify.hpp"

namespace critmatch::cli {

namespace {

enum class Format { Text, Json };

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("critmatch", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::off);
    if (const char* env = std::getenv("CRITICAL_MATCH_LOG")) {
        std::string level = env;
        if (level == "info")
            logger->set_level(spdlog::level::info);
        else if (level == "trace")
            logger->set_level(spdlog::level::trace);
    }
    return logger;
}

void add_gen_flags(CLI::App& cmd, gen::GenParams& p, std::string& config) {
    cmd.add_option("--config", config, "JSON file with generator parameters (flags override it)");
    cmd.add_option("--n-a", p.n_a, "Number of A-vertices");
    cmd.add_option("--n-b", p.n_b, "Number of B-vertices");
    cmd.add_option("--edge-probability", p.edge_probability)->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--tie-density", p.tie_density)->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--critical-fraction-a", p.critical_fraction_a)->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--critical-fraction-b", p.critical_fraction_b)->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--seed", p.seed, "Random seed");
}

// Config file values first, then any flag given on the command line wins.
gen::GenParams resolve_params(const CLI::App& cmd, const gen::GenParams& flags, const std::string& config) {
    if (config.empty()) return flags;
    auto p = gen::params_from_json(nlohmann::json::parse(read_file(config)));
    auto given = [&](const char* name) { return cmd.count(name) > 0; };
    if (given("--n-a")) p.n_a = flags.n_a;
    if (given("--n-b")) p.n_b = flags.n_b;
    if (given("--edge-probability")) p.edge_probability = flags.edge_probability;
    if (given("--tie-density")) p.tie_density = flags.tie_density;
    if (given("--critical-fraction-a")) p.critical_fraction_a = flags.critical_fraction_a;
    if (given("--critical-fraction-b")) p.critical_fraction_b = flags.critical_fraction_b;
    if (given("--seed")) p.seed = flags.seed;
    return p;
}

void write_report_text(std::ostream& out, const verify::VerificationReport& r) {
    out << "# is_matching " << std::boolalpha << r.is_matching << '\n';
    if (!r.is_matching) {
        out << "# matching_error " << r.matching_error << '\n';
        return;
    }
    out << "# blocking_pairs " << r.blocking_pairs.size() << '\n';
    for (const auto& bp : r.blocking_pairs)
        out << "#   (a" << bp.a << ", b" << bp.b << ")" << (bp.justified_by_a ? " justified_by_a" : "")
            << (bp.justified_by_b ? " justified_by_b" : "") << (bp.justified() ? "" : " UNJUSTIFIED") << '\n';
    out << "# is_rsm " << r.is_rsm << '\n'
        << "# critical_covered " << r.critical_covered << '\n'
        << "# max_critical_coverage " << r.max_critical_coverage << '\n'
        << "# is_critical " << r.is_critical << '\n';
    if (r.structure) {
        out << "# structure_ok " << r.structure->ok() << '\n';
        for (const auto& v : r.structure->property1_violations) out << "#   property: " << v << '\n';
        for (const auto& w : r.structure->steep_downward_edges)
            out << "#   steep downward (a" << w.a << ", b" << w.b << ") " << w.bucket_a << " -> " << w.bucket_b << '\n';
        for (const auto& w : r.structure->non_upward_blocking_pairs)
            out << "#   non-upward blocking (a" << w.a << ", b" << w.b << ") " << w.bucket_a << " -> "
                << w.bucket_b << '\n';
    }
}

int cmd_solve(const std::string& path, bool with_verify, Format format, std::ostream& out,
              spdlog::logger& log) {
    Instance inst = parse_instance(read_file(path));
    log.info("solving {} ({}x{}, {} edges, s={}, t={})", path, inst.n_a, inst.n_b, inst.edges.size(), inst.s(),
             inst.t());
    engine::Observer observer;
    if (log.should_log(spdlog::level::trace))
        observer = [&log](const engine::Event& e) { log.trace("{}", engine::to_string(e)); };
    auto result = solve(inst, observer);
    log.info("matched {} pairs with {} proposals", result.matching.size(), result.stats.proposal_count);

    std::optional<verify::VerificationReport> report;
    if (with_verify) report = verify::make_report(inst, result.matching);

    if (format == Format::Json) {
        auto j = to_json(result);
        if (report) j["verification"] = verify::to_json(*report);
        out << j.dump(2) << '\n';
    } else {
        out << format_text(result);
        if (report) write_report_text(out, *report);
    }
    if (report && !report->passed()) {
        log.error("verification failed on solver output");
        return kInvariantBreach;
    }
    return kOk;
}

int cmd_verify(const std::string& inst_path, const std::string& matching_path, Format format,
               std::ostream& out, std::ostream& err) {
    Instance inst = parse_instance(read_file(inst_path));
    Matching m = verify::parse_matching(read_file(matching_path));
    auto report = verify::make_report(inst, m);
    if (format == Format::Json)
        out << verify::to_json(report).dump(2) << '\n';
    else
        write_report_text(out, report);
    if (!report.is_matching) {
        err << "error: " << report.matching_error << '\n';
        return kInputError;
    }
    return report.is_rsm && report.is_critical ? kOk : kCheckFailed;
}

int cmd_oracle(const std::string& path, std::size_t guard, Format format, std::ostream& out) {
    Instance inst = parse_instance(read_file(path));
    auto result = oracle::max_critical_rsm(inst, guard);
    if (format == Format::Json) {
        out << oracle::to_json(result).dump(2) << '\n';
    } else {
        out << "# max_critical_rsm_size " << result.max_critical_rsm_size << '\n'
            << "# num_critical_rsm " << result.num_critical_rsm << '\n'
            << "# max_critical_coverage " << result.max_coverage << '\n'
            << "# per_side_critical_counts " << result.per_side_critical_counts.from_a << ' '
            << result.per_side_critical_counts.from_b << (result.per_side_counts_shared ? "" : " (NOT shared)")
            << '\n'
            << verify::serialize_matching(result.witness);
    }
    return result.num_critical_rsm > 0 && result.per_side_counts_shared ? kOk : kInvariantBreach;
}

int cmd_bench(const gen::GenParams& base, std::size_t count, std::size_t guard, std::size_t jobs, bool timing,
              std::ostream& out, spdlog::logger& log) {
    std::vector<ExperimentRow> rows(count);
    std::vector<std::string> failures(count);
    auto work = [&](std::size_t i) {
        auto p = base;
        p.seed = gen::derive_seed(base.seed, i);
        try {
            rows[i] = run_experiment(p, guard, timing);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    };
    jobs = std::max<std::size_t>(1, std::min(jobs, std::max<std::size_t>(count, 1)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < count; i += jobs) work(i);
            });
        for (auto& th : pool) th.join();
    }

    int status = kOk;
    out << csv_header() << '\n';
    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i].empty()) {
            log.error("instance {}: {}", i, failures[i]);
            status = kInvariantBreach;
            continue;
        }
        out << to_csv(rows[i]) << '\n';
        if (!rows[i].sound()) {
            log.error("instance {} (seed {}) breaks a guarantee", i, rows[i].seed);
            status = kInvariantBreach;
        }
    }
    log.info("bench finished: {} rows", count);
    return status;
}

Format parse_format(const std::string& s) { return s == "json" ? Format::Json : Format::Text; }

}  // namespace

std::string ExperimentRow::ratio() const {
    if (!oracle_max_size) return "";
    std::size_t p = solver_size, q = *oracle_max_size;
    if (q == 0) return "1/1";
    auto g = std::gcd(p, q);
    return std::to_string(p / g) + "/" + std::to_string(q / g);
}

bool ExperimentRow::sound() const {
    bool ratio_ok = !oracle_max_size || 3 * solver_size >= 2 * *oracle_max_size;
    return ratio_ok && is_rsm && is_critical && structure_ok;
}

std::string csv_header() {
    return "seed,n_a,n_b,s,t,solver_size,oracle_max_size,ratio,is_rsm,is_critical,structure_ok,"
           "blocking_pairs,proposal_count,elapsed_ms";
}

std::string to_csv(const ExperimentRow& r) {
    std::ostringstream out;
    out << r.seed << ',' << r.n_a << ',' << r.n_b << ',' << r.s << ',' << r.t << ',' << r.solver_size << ',';
    if (r.oracle_max_size) out << *r.oracle_max_size;
    out << ',' << r.ratio() << ',' << std::boolalpha << r.is_rsm << ',' << r.is_critical << ',' << r.structure_ok
        << ',' << r.blocking_pairs << ',' << r.proposal_count << ',';
    if (r.elapsed_ms) out << std::fixed << std::setprecision(3) << *r.elapsed_ms;
    return out.str();
}

ExperimentRow run_experiment(const gen::GenParams& params, std::size_t oracle_max, bool timing) {
    auto inst = gen::random_instance(params);
    ExperimentRow row;
    row.seed = params.seed;
    row.n_a = inst.n_a;
    row.n_b = inst.n_b;
    row.s = inst.s();
    row.t = inst.t();

    auto start = std::chrono::steady_clock::now();
    auto result = solve(inst);
    auto stop = std::chrono::steady_clock::now();
    if (timing) row.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();

    row.solver_size = result.matching.size();
    row.proposal_count = result.stats.proposal_count;
    auto report = verify::make_report(inst, result.matching);
    row.is_rsm = report.is_rsm;
    row.is_critical = report.is_critical;
    row.blocking_pairs = report.blocking_pairs.size();
    row.structure_ok = report.structure && report.structure->ok();
    if (inst.n_a <= oracle_max && inst.n_b <= oracle_max)
        row.oracle_max_size = oracle::max_critical_rsm(inst, oracle_max).max_critical_rsm_size;
    return row;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);

    CLI::App app{"Critical relaxed stable matchings under two-sided ties", "critmatch"};
    app.require_subcommand(1);

    std::string format_name = "text";
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"text", "json"}));
    };

    std::string inst_path, matching_path, config;
    bool with_verify = false, timing = false;
    std::size_t guard = 6, count = 100, jobs = 1;
    gen::GenParams params;

    auto* solve_cmd = app.add_subcommand("solve", "Compute a critical relaxed stable matching");
    solve_cmd->add_option("instance", inst_path, "Instance file")->required();
    solve_cmd->add_flag("--verify", with_verify, "Append a verification report");
    add_format(solve_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Check a matching against an instance");
    verify_cmd->add_option("instance", inst_path, "Instance file")->required();
    verify_cmd->add_option("matching", matching_path, "Matching file with 'pair <a> <b>' lines")->required();
    add_format(verify_cmd);

    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive search for a maximum critical RSM");
    oracle_cmd->add_option("instance", inst_path, "Instance file")->required();
    oracle_cmd->add_option("--oracle-max", guard, "Largest side size to enumerate");
    add_format(oracle_cmd);

    auto* gen_cmd = app.add_subcommand("gen", "Write a random instance");
    add_gen_flags(*gen_cmd, params, config);
    add_format(gen_cmd);

    auto* bench_cmd = app.add_subcommand("bench", "Solve, verify and compare against the oracle as CSV");
    add_gen_flags(*bench_cmd, params, config);
    bench_cmd->add_option("--count", count, "Number of instances");
    bench_cmd->add_option("--oracle-max", guard, "Largest side size for the oracle columns");
    bench_cmd->add_option("--jobs", jobs, "Worker threads");
    bench_cmd->add_flag("--timing", timing, "Fill elapsed_ms (output is then no longer byte-stable)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    const Format format = parse_format(format_name);
    try {
        if (*solve_cmd) return cmd_solve(inst_path, with_verify, format, out, *log);
        if (*verify_cmd) return cmd_verify(inst_path, matching_path, format, out, err);
        if (*oracle_cmd) return cmd_oracle(inst_path, guard, format, out);
        if (*gen_cmd) {
            auto p = resolve_params(*gen_cmd, params, config);
            auto inst = gen::random_instance(p);
            out << (format == Format::Json ? instance_to_json(inst).dump(2) + "\n" : serialize_instance(inst));
            return kOk;
        }
        if (*bench_cmd) return cmd_bench(resolve_params(*bench_cmd, params, config), count, guard, jobs, timing, out, *log);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const oracle::SizeGuardError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const InvariantError& e) {
        err << "internal invariant breached: " << e.what() << '\n';
        return kInvariantBreach;
    }
    return kInputError;
}

}  // namespace critmatch::cli

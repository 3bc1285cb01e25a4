#pragma once

/// \file
/// Command-line front end. Exit codes:
///   0  every requested computation completed (statistics never matter,
///      except under --assert)
///   1  --assert was given and a statistical expectation failed, or a
///      replay produced different bytes
///   2  usage error
///   3  domain / precondition error
///   4  I/O error

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rmf/dirichlet.hpp"
#include "rmf/errors.hpp"
#include "rmf/io.hpp"
#include "rmf/mellin.hpp"
#include "rmf/montecarlo.hpp"
#include "rmf/partial_sums.hpp"
#include "rmf/prime_engine.hpp"
#include "rmf/sampler.hpp"

namespace rmf::cli {

enum ExitCode : int {
    kOk = 0,
    kExpectationFailed = 1,
    kUsage = 2,
    kDomain = 3,
    kIo = 4,
};

namespace detail {

struct AssignmentFlags {
    std::string mode = "iid";
    std::uint64_t seed = 0;
    std::string signs_file;

    void add_to(CLI::App* app) {
        app->add_option("--seed", seed, "Seed of the iid Rademacher signs");
        app->add_option("--mode", mode, "Sign assignment: iid | all_minus_one | explicit")
            ->check(CLI::IsMember({"iid", "iid_rademacher", "all_minus_one", "explicit"}));
        app->add_option("--signs", signs_file, "Two-column 'p sign' file for --mode explicit");
    }

    SignAssignment build() const {
        switch (parse_sign_mode(mode)) {
            case SignMode::IidRademacher: return SignAssignment::iid(seed);
            case SignMode::AllMinusOne: return SignAssignment::all_minus_one();
            case SignMode::Explicit:
                if (signs_file.empty()) throw InvalidArgument("--mode explicit requires --signs FILE");
                return load_explicit_signs(signs_file);
        }
        throw InvalidArgument("unknown mode");
    }
};

struct ExperimentFlags {
    std::string model = "f";
    double alpha = 0.0;
    std::uint32_t limit = 1000000;
    std::uint32_t trials = 100;
    std::uint64_t seed = 0;
    std::string mode = "iid";
    std::vector<double> sigmas;
    std::uint64_t prime_limit = 0;
    double grid_step = 0.0;
    std::uint32_t min_sign_changes = 5;
    std::optional<double> threshold;
    std::vector<double> thetas = {0.0, 0.25, 0.5};
    std::vector<std::uint32_t> checkpoints = {10000, 100000, 1000000};

    ExperimentConfig to_config(ExperimentKind kind, unsigned threads, const std::string& out) const {
        ExperimentConfig c;
        c.experiment = kind;
        c.model = parse_model(model);
        c.alpha = alpha;
        c.limit = limit;
        c.trials = trials;
        c.base_seed = seed;
        c.assignment_mode = parse_sign_mode(mode);
        c.sigma_grid = sigmas;
        if (prime_limit > 0) c.prime_limit = prime_limit;
        c.grid_step = grid_step;
        c.min_sign_changes = min_sign_changes;
        c.pass_threshold = threshold;
        c.thetas = thetas;
        c.checkpoints = checkpoints;
        c.threads = threads;
        c.output_path = out;
        return c;
    }
};

inline void print_stats(std::ostream& out, const AggregateStats& st, const WrittenExperiment& w) {
    out << to_string(st.config.experiment) << ": " << st.trials.size() << " trials, model "
        << to_string(st.config.model) << ", alpha " << format_double(st.config.alpha) << ", N "
        << st.config.limit << "\n";
    out << "  " << st.statistic << ": mean " << format_double(st.summary.mean) << ", median "
        << format_double(st.summary.median) << ", q05 " << format_double(st.summary.q05) << ", q95 "
        << format_double(st.summary.q95) << "\n";
    if (st.pass_fraction) out << "  pass_fraction: " << format_double(*st.pass_fraction) << "\n";
    for (const auto& [k, v] : st.extras) out << "  " << k << ": " << format_double(v) << "\n";
    if (st.reporting_only) {
        out << "  reporting only: no pass/fail is claimed for this configuration\n";
    } else if (st.expectation_met) {
        out << "  expectation (engineering threshold " << format_double(pass_threshold_of(st.config))
            << "): " << (*st.expectation_met ? "met" : "NOT met") << "\n";
    }
    out << "  wrote " << w.manifest.string() << " and " << w.csv.string() << " (digest "
        << w.csv_digest << ")\n";
}

}  // namespace detail

inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out,
                              std::ostream& err) {
    CLI::App app{"Simulation lab for Rademacher random multiplicative functions", "rmf_lab"};
    app.require_subcommand(1);
    unsigned threads = 0;
    bool assert_mode = false;
    std::string out_dir;
    app.add_option("--threads", threads, "Worker threads (default: $RMF_LAB_THREADS or all cores)");
    app.add_flag("--assert", assert_mode, "Exit 1 when a statistical expectation is not met");
    app.add_option("--out", out_dir, "Output directory");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "Worker threads");
        sub->add_flag("--assert", assert_mode, "Exit 1 when a statistical expectation is not met");
        sub->add_option("--out", out_dir, "Output directory");
    };

    // series ----------------------------------------------------------------
    detail::AssignmentFlags series_assign;
    std::string series_model = "f";
    double series_alpha = 0.0;
    std::uint32_t series_limit = 1000;
    bool compensated = false;
    auto* series_cmd = app.add_subcommand("series", "Compute one weighted partial-sum series");
    add_common(series_cmd);
    series_assign.add_to(series_cmd);
    series_cmd->add_option("--model", series_model, "f | fstar");
    series_cmd->add_option("--alpha", series_alpha, "Weight exponent in [0, 1]");
    series_cmd->add_option("--limit", series_limit, "N");
    series_cmd->add_flag("--compensated", compensated, "Neumaier-compensated summation");

    // experiments -------------------------------------------------------------
    struct ExperimentCommand {
        ExperimentKind kind;
        CLI::App* app;
        detail::ExperimentFlags flags;
    };
    std::vector<ExperimentCommand> experiments;
    experiments.reserve(5);
    const std::pair<ExperimentKind, const char*> kinds[] = {
        {ExperimentKind::SignChanges, "Sign-change census over many seeds"},
        {ExperimentKind::Positivity, "Positivity of sum f*(n)/n over many seeds"},
        {ExperimentKind::HarperScan, "Large values of the prime cosine sum"},
        {ExperimentKind::Divergence, "Signed vs absolute Mellin integrals toward sigma = 1/2"},
        {ExperimentKind::Growth, "Growth of sum f(n) against sqrt(x)(log log x)^theta"},
    };
    for (const auto& [kind, desc] : kinds) {
        experiments.push_back({kind, app.add_subcommand(to_string(kind), desc), {}});
        auto& e = experiments.back();
        auto* sub = e.app;
        auto& f = e.flags;
        add_common(sub);
        if (kind == ExperimentKind::Positivity) {
            f.model = "fstar";
            f.alpha = 1.0;
            f.limit = 10000;
            f.trials = 10000;
        }
        if (kind == ExperimentKind::HarperScan) f.prime_limit = 1000000;
        if (kind == ExperimentKind::Divergence) f.prime_limit = 100000;
        sub->add_option("--model", f.model, "f | fstar");
        sub->add_option("--alpha", f.alpha, "Weight exponent");
        sub->add_option("--limit", f.limit, "N");
        sub->add_option("--trials", f.trials, "Number of trials");
        sub->add_option("--seed", f.seed, "Base seed");
        sub->add_option("--mode", f.mode, "iid | all_minus_one")
            ->check(CLI::IsMember({"iid", "iid_rademacher", "all_minus_one"}));
        sub->add_option("--threshold", f.threshold, "Expected pass fraction (engineering default)");
        if (kind == ExperimentKind::SignChanges) {
            sub->add_option("--min-changes", f.min_sign_changes, "Sign changes needed for a trial to pass");
        }
        if (kind == ExperimentKind::HarperScan || kind == ExperimentKind::Divergence) {
            sub->add_option("--sigma", f.sigmas, "Sigma grid, decreasing (comma separated)")
                ->delimiter(',');
            sub->add_option("--prime-limit", f.prime_limit, "Primes p <= P");
            sub->add_option("--grid-step", f.grid_step, "t spacing (default 0.01/log(1/(sigma-1/2)))");
        }
        if (kind == ExperimentKind::Growth) {
            sub->add_option("--theta", f.thetas, "Exponents of log log x")->delimiter(',');
            sub->add_option("--checkpoints", f.checkpoints, "Intermediate N values")->delimiter(',');
        }
    }

    // euler -----------------------------------------------------------------------
    detail::AssignmentFlags euler_assign;
    std::string euler_model = "f";
    double euler_sigma = 1.0;
    double euler_t = 0.0;
    std::uint64_t euler_prime_limit = 1000000;
    auto* euler_cmd = app.add_subcommand("euler", "Truncated Euler product of F or F* at one point");
    add_common(euler_cmd);
    euler_assign.add_to(euler_cmd);
    euler_cmd->add_option("--model", euler_model, "f | fstar");
    euler_cmd->add_option("--sigma", euler_sigma, "Re s");
    euler_cmd->add_option("--t", euler_t, "Im s");
    euler_cmd->add_option("--prime-limit", euler_prime_limit, "Primes p <= P");

    // mellin-check ------------------------------------------------------------------
    detail::AssignmentFlags mellin_assign;
    std::string mellin_model = "f";
    double mellin_alpha = 0.5;
    double mellin_sigma = 0.75;
    double mellin_t = 0.0;
    std::uint32_t mellin_limit = 100000;
    auto* mellin_cmd =
        app.add_subcommand("mellin-check", "Residual of the truncated partial-summation identity");
    add_common(mellin_cmd);
    mellin_assign.add_to(mellin_cmd);
    mellin_cmd->add_option("--model", mellin_model, "f | fstar");
    mellin_cmd->add_option("--alpha", mellin_alpha, "Weight exponent");
    mellin_cmd->add_option("--sigma", mellin_sigma, "Re s");
    mellin_cmd->add_option("--t", mellin_t, "Im s");
    mellin_cmd->add_option("--limit", mellin_limit, "N");

    // replay --------------------------------------------------------------------------
    std::string replay_dir;
    auto* replay_cmd = app.add_subcommand("replay", "Rerun an experiment from its manifest and compare digests");
    add_common(replay_cmd);
    replay_cmd->add_option("dir", replay_dir, "Experiment directory holding manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (series_cmd->parsed()) {
            const SpfTable table(std::max<std::uint32_t>(series_limit, 2));
            const SignAssignment a = series_assign.build();
            const auto series = compute_series(a, parse_model(series_model), series_alpha, series_limit,
                                               table, compensated ? Summation::Compensated
                                                                  : Summation::Ascending);
            const auto log = detect_sign_changes(series);
            out << "M(" << series.limit << ") = " << format_double(series.values.back())
                << ", sign changes " << log.count() << ", max |M| " << format_double(series.max_abs)
                << " at x = " << series.argmax << "\n";
            if (!out_dir.empty()) {
                const std::filesystem::path dir = out_dir;
                nlohmann::json m = {{"command", "series"},
                                    {"model", series_model},
                                    {"alpha", series_alpha},
                                    {"N", series_limit},
                                    {"mode", to_string(a.mode())},
                                    {"seed", a.seed()},
                                    {"summation", compensated ? "compensated" : "ascending"},
                                    {"tool_version", kToolVersion}};
                const std::string csv = series_to_csv(series);
                const std::string changes = sign_changes_to_csv(log);
                m["series_digest"] = digest_hex(csv);
                m["sign_changes_digest"] = digest_hex(changes);
                atomic_write(dir / "manifest.json", m.dump(2) + "\n");
                atomic_write(dir / "series.csv", csv);
                atomic_write(dir / "sign_changes.csv", changes);
                out << "wrote " << (dir / "series.csv").string() << "\n";
            }
            return kOk;
        }

        for (auto& e : experiments) {
            if (!e.app->parsed()) continue;
            const std::string dir = out_dir.empty() ? std::string("rmf_out/") + to_string(e.kind) : out_dir;
            const ExperimentConfig config = e.flags.to_config(e.kind, threads, dir);
            const AggregateStats st = run_experiment(config);
            const auto written = write_experiment(st, dir);
            detail::print_stats(out, st, written);
            if (assert_mode && st.expectation_met && !*st.expectation_met) return kExpectationFailed;
            return kOk;
        }

        if (euler_cmd->parsed()) {
            const Model model = parse_model(euler_model);
            const SignAssignment a = euler_assign.build();
            const ComplexPoint s{euler_sigma, euler_t};
            require_right_of_half(euler_sigma, "euler");
            const SpfTable table(std::max<std::uint64_t>(euler_prime_limit, 2));
            const PrimeList primes(table);
            const auto product = euler_product(model, a, s, euler_prime_limit, primes);
            out << (model == Model::F ? "F" : "F*") << "(" << format_double(euler_sigma) << " + "
                << format_double(euler_t) << "i) = " << format_double(product.value.real()) << " + "
                << format_double(product.value.imag()) << "i  (primes <= " << euler_prime_limit
                << ", |last factor - 1| = " << format_double(product.last_factor_deviation) << ")\n";
            if (euler_sigma >= 0.51 && euler_prime_limit >= 1000) {
                out << "exponential formula residual: "
                    << format_double(exponential_formula_check(a, s, euler_prime_limit, primes, model)) << "\n";
            }
            return kOk;
        }

        if (mellin_cmd->parsed()) {
            const SpfTable table(std::max<std::uint32_t>(mellin_limit, 2));
            const SignAssignment a = mellin_assign.build();
            const auto ev = evaluate_mellin(a, parse_model(mellin_model), mellin_alpha,
                                            {mellin_sigma, mellin_t}, mellin_limit, table);
            const double bound = 1e-9 * (std::abs(ev.dirichlet_sum) + 1.0);
            out << "sum g(n) n^-s = " << format_double(ev.dirichlet_sum.real()) << " + "
                << format_double(ev.dirichlet_sum.imag()) << "i\n";
            out << "mellin + boundary = " << format_double((ev.signed_integral + ev.boundary_term).real())
                << " + " << format_double((ev.signed_integral + ev.boundary_term).imag()) << "i\n";
            out << "residual " << format_double(ev.residual) << " (bound " << format_double(bound) << ") "
                << (ev.residual <= bound ? "ok" : "EXCEEDED") << "\n";
            if (assert_mode && ev.residual > bound) return kExpectationFailed;
            return kOk;
        }

        if (replay_cmd->parsed()) {
            const std::filesystem::path dir = replay_dir;
            const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
            ExperimentConfig config = config_from_manifest(manifest);
            config.threads = threads;
            const AggregateStats st = run_experiment(config);
            const std::string digest = digest_hex(trials_to_csv(st));
            const std::string recorded = manifest.value("csv_digest", "");
            const bool csv_ok = digest_hex(read_file(dir / "trials.csv")) == recorded;
            out << "recorded digest " << recorded << ", replayed " << digest
                << (csv_ok ? "" : " (trials.csv on disk does not match its manifest)") << "\n";
            const bool match = digest == recorded && csv_ok;
            out << (match ? "replay reproduces the run bit for bit\n" : "replay MISMATCH\n");
            return match ? kOk : kExpectationFailed;
        }
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const nlohmann::json::exception& e) {
        err << "manifest error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kDomain;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}

}  // namespace rmf::cli

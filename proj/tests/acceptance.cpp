// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [output_dir] [--only ID[,ID...]]
//
// Manifests and per-trial CSVs of every statistical run are written under
// output_dir (default ./acceptance_out).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rmf/dirichlet.hpp"
#include "rmf/io.hpp"
#include "rmf/mellin.hpp"
#include "rmf/montecarlo.hpp"
#include "rmf/zeta.hpp"

using namespace rmf;
namespace fs = std::filesystem;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string name;
    double budget_seconds;
    std::function<Verdict()> run;
};

fs::path g_out = "acceptance_out";

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const SpfTable& sieve_1e6() {
    static const SpfTable t(1000000);
    return t;
}

const PrimeList& primes_1e6() {
    static const PrimeList p(sieve_1e6());
    return p;
}

AggregateStats run_and_write(const ExperimentConfig& c, const std::string& name) {
    const auto st = run_experiment(c);
    write_experiment(st, g_out / name);
    return st;
}

// 1. Exact identities ---------------------------------------------------------

Verdict convolution_identity() {
    const SpfTable table(10000);
    std::size_t mismatches = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MultiplicativeEvaluator e(SignAssignment::iid(trial_seed(2024, seed)), table);
        for (std::uint32_t n = 1; n <= 10000; ++n) {
            mismatches += e.evaluate_f_star_by_convolution(n) != e.evaluate_f_star(n);
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over 10 seeds x 10^4 n"};
}

Verdict mellin_identity() {
    const SpfTable table(100000);
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double alphas[] = {0.0, 0.25, 0.5};
    const std::uint32_t limits[] = {1000, 100000};
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 100; ++i) {
        const double alpha = alphas[rng() % 3];
        const std::uint32_t limit = limits[rng() % 2];
        const double lo = alpha + 0.05;
        double sigma = lo + (1.5 - lo) * unit(rng);
        if (sigma <= lo) sigma = 1.5;
        const double t = i % 2 ? 0.0 : -25.0 + 50.0 * unit(rng);
        const Model model = rng() % 2 ? Model::F : Model::FStar;
        const auto ev = evaluate_mellin(SignAssignment::iid(rng()), model, alpha, {sigma, t}, limit, table);
        const double rel = ev.residual / (std::abs(ev.dirichlet_sum) + 1.0);
        worst = std::max(worst, rel);
        failures += !(rel <= 1e-9);
    }
    return {failures == 0, "worst residual/(|D|+1) = " + fmt("%.3g", worst) + " (tol 1e-9), 100 configs"};
}

Verdict euler_classical() {
    const auto a = SignAssignment::all_minus_one();
    const double f = euler_product_F(a, {2.0, 0.0}, 1000000, primes_1e6()).value.real();
    const double fs_ = euler_product_F_star(a, {2.0, 0.0}, 1000000, primes_1e6()).value.real();
    const double target_f = 6.0 / (kPi * kPi);
    const double target_fs = (kPi * kPi / 15.0);
    const double ef = std::abs(f - target_f);
    const double efs = std::abs(fs_ - target_fs);
    return {ef <= 1e-4 && efs <= 1e-4,
            "|F(2) - 6/pi^2| = " + fmt("%.3g", ef) + ", |F*(2) - zeta(4)/zeta(2)| = " + fmt("%.3g", efs) +
                " (tol 1e-4)"};
}

Verdict zeta_checks() {
    const double e2 = std::abs(zeta(2.0) - kPi * kPi / 6.0);
    double worst = 0.0;
    for (double sigma : {0.51, 0.505, 0.501}) {
        worst = std::max(worst, std::abs(std::log(zeta(2.0 * sigma)) + std::log(2.0 * sigma - 1.0)));
    }
    return {e2 <= 1e-10 && worst <= 1.0,
            "|zeta(2) - pi^2/6| = " + fmt("%.3g", e2) + " (tol 1e-10), max |log zeta(2s) + log(2s-1)| = " +
                fmt("%.4f", worst) + " (bound 1)"};
}

// 2. Oracle equivalence -----------------------------------------------------------

Verdict mobius_liouville() {
    const SpfTable table(100000);
    const MultiplicativeEvaluator e(SignAssignment::all_minus_one(), table);
    const auto mu = oracle::mobius_table(100000);
    std::size_t bad = 0;
    for (std::uint32_t n = 1; n <= 100000; ++n) {
        bad += e.evaluate_f(n) != mu[n];
        bad += e.evaluate_f_star(n) != oracle::liouville(n);
    }
    const auto m = compute_series(SignAssignment::all_minus_one(), Model::F, 0.0, 10, table);
    const auto l = compute_series(SignAssignment::all_minus_one(), Model::FStar, 0.0, 10, table);
    const bool spot = m.at(10) == -1.0 && l.at(10) == 0.0;
    return {bad == 0 && spot, std::to_string(bad) + " mismatches for n <= 10^5; M(10) = " +
                                  fmt("%g", m.at(10)) + ", L(10) = " + fmt("%g", l.at(10))};
}

Verdict quadrature_oracle() {
    const SpfTable table(20000);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double alphas[] = {0.0, 0.25, 0.5};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double alpha = alphas[i % 3];
        const double lo = alpha + 0.05;
        const ComplexPoint s{lo + (1.5 - lo) * unit(rng), i % 2 ? 0.0 : -10.0 + 20.0 * unit(rng)};
        const auto limit = static_cast<std::uint32_t>(1000 + rng() % 19000);
        const Model model = i % 4 < 2 ? Model::F : Model::FStar;
        const auto series = compute_series(SignAssignment::iid(rng()), model, alpha, limit, table);
        const cd exact = mellin_step_integral(series, s);
        const cd quad = (s.value() - alpha) * oracle::step_integral_quadrature(series.values, alpha, s.value());
        worst = std::max(worst, std::abs(exact - quad));
    }
    return {worst <= 1e-8, "max |closed form - quadrature| = " + fmt("%.3g", worst) + " (tol 1e-8), 20 configs"};
}

// 3. Statistical suites --------------------------------------------------------

ExperimentConfig sign_config(Model model, double alpha) {
    ExperimentConfig c;
    c.experiment = ExperimentKind::SignChanges;
    c.model = model;
    c.alpha = alpha;
    c.limit = 1000000;
    c.trials = 100;
    c.base_seed = 1;
    c.min_sign_changes = 5;
    return c;
}

Verdict sign_change_suite(Model model, std::vector<double> alphas, const std::string& tag) {
    bool ok = true;
    std::string detail;
    for (const double alpha : alphas) {
        const auto c = sign_config(model, alpha);
        const auto st = run_and_write(c, tag + "_alpha" + label(alpha));
        ok = ok && st.expectation_met.value_or(false);
        detail += "alpha " + label(alpha) + ": " + fmt("%.2f", *st.pass_fraction) + " (median " +
                  fmt("%g", st.summary.median) + " changes); ";
    }
    return {ok, detail + "need >= 0.95 of 100 trials with >= 5 changes, N = 10^6"};
}

Verdict reporting_only_census() {
    const auto c = sign_config(Model::FStar, 0.5);
    const auto st = run_and_write(c, "census_fstar_alpha0.5");
    const bool reporting = st.reporting_only && !st.pass_fraction && !st.expectation_met;
    const auto counts = st.column("sign_changes");
    const auto zero = std::count(counts.begin(), counts.end(), 0.0);
    return {reporting, "reported only: median " + fmt("%g", st.summary.median) + " changes, q05 " +
                           fmt("%g", st.summary.q05) + ", q95 " + fmt("%g", st.summary.q95) + ", " +
                           std::to_string(zero) + " trials without a change; no pass/fail claimed"};
}

Verdict positivity() {
    ExperimentConfig c;
    c.experiment = ExperimentKind::Positivity;
    c.model = Model::FStar;
    c.alpha = 1.0;
    c.limit = 10000;
    c.trials = 10000;
    c.base_seed = 3;
    const auto st = run_and_write(c, "positivity");
    return {st.expectation_met.value_or(false),
            "pass_fraction " + fmt("%.4f", *st.pass_fraction) + " (need >= 0.99), 10^4 trials, N = 10^4"};
}

Verdict harper_trend() {
    ExperimentConfig c;
    c.experiment = ExperimentKind::HarperScan;
    c.sigma_grid = {0.58, 0.55, 0.52, 0.51};
    c.prime_limit = 1000000;
    c.trials = 100;
    c.base_seed = 4;
    ExperimentContext ctx(c);
    const auto st = run_experiment(c, &ctx);
    write_experiment(st, g_out / "harper");
    std::string medians;
    for (const double s : c.sigma_grid) {
        medians += label(s) + ": " + fmt("%.4f", st.extras.at("median_centered_" + label(s))) + ", ";
    }
    return {st.expectation_met.value_or(false),
            "median centered sup " + medians + fmt("%g", st.extras.at("trend_steps_increasing")) +
                " of 3 steps increasing (need 3)"};
}

Verdict divergence_gap() {
    bool ok = true;
    std::string detail;
    const std::pair<Model, double> cases[] = {{Model::F, 0.5}, {Model::FStar, 0.0}};
    for (const auto& [model, alpha] : cases) {
        ExperimentConfig c;
        c.experiment = ExperimentKind::Divergence;
        c.model = model;
        c.alpha = alpha;
        c.limit = 1000000;
        c.trials = 50;
        c.base_seed = 5;
        c.sigma_grid = {0.6, 0.56, 0.53, 0.51};
        c.prime_limit = 100000;
        const auto st = run_and_write(c, std::string("divergence_") + to_string(model) + "_alpha" + label(alpha));
        const bool triangle = st.extras.at("triangle_all") == 1.0;
        ok = ok && triangle && st.expectation_met.value_or(false);
        detail += std::string(to_string(model)) + " alpha " + label(alpha) + ": triangle " +
                  (triangle ? "holds" : "VIOLATED") + ", increasing ratio in " +
                  fmt("%.2f", *st.pass_fraction) + " of seeds; ";
    }
    return {ok, detail + "need triangle everywhere and > 0.5"};
}

// 4. Determinism ---------------------------------------------------------------

Verdict determinism() {
    std::vector<ExperimentConfig> configs;
    {
        ExperimentConfig c = sign_config(Model::FStar, 0.25);
        c.limit = 200000;
        c.trials = 24;
        configs.push_back(c);
    }
    {
        ExperimentConfig c;
        c.experiment = ExperimentKind::HarperScan;
        c.sigma_grid = {0.56, 0.51};
        c.prime_limit = 20000;
        c.trials = 8;
        configs.push_back(c);
    }
    {
        ExperimentConfig c;
        c.experiment = ExperimentKind::Divergence;
        c.alpha = 0.5;
        c.limit = 50000;
        c.trials = 8;
        c.sigma_grid = {0.6, 0.52};
        c.prime_limit = 5000;
        configs.push_back(c);
    }
    bool ok = true;
    int index = 0;
    for (auto c : configs) {
        const fs::path base = g_out / ("determinism_" + std::to_string(index++));
        c.threads = 1;
        const auto w1 = write_experiment(run_experiment(c), base / "threads1");
        // Rebuild the config from the manifest alone and rerun with more workers.
        auto replay = config_from_manifest(nlohmann::json::parse(read_file(w1.manifest)));
        const std::string ref = read_file(w1.csv);
        for (unsigned threads : {4u, 8u}) {
            replay.threads = threads;
            const auto w = write_experiment(run_experiment(replay), base / ("threads" + std::to_string(threads)));
            ok = ok && read_file(w.csv) == ref && w.csv_digest == w1.csv_digest;
        }
    }
    return {ok, ok ? "per-trial CSV byte-identical for 1, 4, 8 workers (sign-changes, harper, divergence)"
                   : "per-trial CSV differs between worker counts"};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<std::string> only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string id;
            while (std::getline(ss, id, ',')) only.insert(id);
        } else {
            g_out = arg;
        }
    }
    fs::create_directories(g_out);

    const std::vector<Criterion> criteria = {
        {"1.1", "convolution identity f* = f * 1_squares", 5, convolution_identity},
        {"1.2", "truncated partial-summation identity", 60, mellin_identity},
        {"1.3", "Euler products at s = 2", 10, euler_classical},
        {"1.4", "zeta(2) and log zeta(2 sigma) near the pole", 10, zeta_checks},
        {"2.1", "Moebius / Liouville oracle equivalence", 10, mobius_liouville},
        {"2.2", "step integral vs adaptive quadrature", 60, quadrature_oracle},
        {"3.1", "sign changes, model f, alpha in {0, 0.25, 0.5}", 900,
         [] { return sign_change_suite(Model::F, {0.0, 0.25, 0.5}, "sign_changes_f"); }},
        {"3.2", "sign changes, model f*, alpha in {0, 0.25}", 900,
         [] { return sign_change_suite(Model::FStar, {0.0, 0.25}, "sign_changes_fstar"); }},
        {"3.3", "reporting-only census, model f*, alpha = 1/2", 900, reporting_only_census},
        {"3.4", "positivity of sum f*(n)/n", 600, positivity},
        {"3.5", "large-values trend", 1200, harper_trend},
        {"3.6", "divergence gap", 1200, divergence_gap},
        {"4.1", "determinism across worker counts", 600, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs <= c.budget_seconds;
        const bool pass = v.pass && in_budget;
        failed += !pass;
        std::cout << (pass ? "PASS " : "FAIL ") << c.id << "  " << c.name << ": " << v.detail << " ["
                  << fmt("%.1f", secs) << " s, budget " << fmt("%g", c.budget_seconds) << " s"
                  << (in_budget ? "" : ", OVER BUDGET") << "]" << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}

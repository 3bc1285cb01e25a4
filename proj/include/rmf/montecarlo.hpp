#pragma once

/// \file
/// Multi-seed experiments over independent realizations of f / f*.
///
/// Trial i draws its signs from seed trial_seed(base_seed, i), so every
/// per-trial record is a pure function of (config, i): worker count and
/// execution order never change results. Aggregation is an ordered fold by
/// trial index, and every summary number is recomputable from the per-trial
/// records alone (finalize_summary).
///
/// Statistical thresholds (pass_threshold, min_sign_changes) are engineering
/// defaults fixed by pilot runs, not constants of the underlying theory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmf/dirichlet.hpp"
#include "rmf/errors.hpp"
#include "rmf/mellin.hpp"
#include "rmf/mixing.hpp"
#include "rmf/parallel.hpp"
#include "rmf/partial_sums.hpp"
#include "rmf/prime_engine.hpp"
#include "rmf/sampler.hpp"

namespace rmf {

enum class ExperimentKind { SignChanges, Positivity, HarperScan, Divergence, Growth };

inline const char* to_string(ExperimentKind k) noexcept {
    switch (k) {
        case ExperimentKind::SignChanges: return "sign-changes";
        case ExperimentKind::Positivity: return "positivity";
        case ExperimentKind::HarperScan: return "harper";
        case ExperimentKind::Divergence: return "divergence";
        case ExperimentKind::Growth: return "growth";
    }
    return "?";
}

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::SignChanges;
    Model model = Model::F;
    double alpha = 0.0;
    std::uint32_t limit = 1;
    std::uint32_t trials = 1;
    std::uint64_t base_seed = 0;
    std::vector<double> sigma_grid;
    std::optional<std::uint64_t> prime_limit;
    std::string output_path;

    /// IidRademacher or AllMinusOne (the deterministic mu / lambda mode).
    SignMode assignment_mode = SignMode::IidRademacher;
    /// Worker count; 0 = RMF_LAB_THREADS or hardware concurrency.
    unsigned threads = 0;
    /// Large-values scan spacing; 0 selects 0.01 / log(1/(sigma - 1/2)).
    double grid_step = 0.0;

    std::uint32_t min_sign_changes = 5;
    /// Expected pass fraction; unset selects the per-experiment default
    /// (sign changes 0.95, positivity 0.99, divergence 0.5 exclusive).
    std::optional<double> pass_threshold;

    std::vector<double> thetas = {0.0, 0.25, 0.5};
    std::vector<std::uint32_t> checkpoints = {10000, 100000, 1000000};
};

inline SignAssignment trial_assignment(const ExperimentConfig& config, std::uint32_t index) {
    if (config.assignment_mode == SignMode::AllMinusOne) return SignAssignment::all_minus_one();
    if (config.assignment_mode != SignMode::IidRademacher) {
        throw InvalidArgument("experiments support iid_rademacher or all_minus_one assignments");
    }
    return SignAssignment::iid(trial_seed(config.base_seed, index));
}

inline std::uint64_t trial_seed_of(const ExperimentConfig& config, std::uint32_t index) {
    return config.assignment_mode == SignMode::AllMinusOne ? 0 : trial_seed(config.base_seed, index);
}

/// Sign-change counts for model F*, alpha = 1/2 are never judged.
inline bool is_reporting_only(const ExperimentConfig& c) {
    switch (c.experiment) {
        case ExperimentKind::SignChanges: return c.model == Model::FStar && c.alpha == 0.5;
        case ExperimentKind::Growth: return true;
        default: return false;
    }
}

inline double default_pass_threshold(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::SignChanges: return 0.95;
        case ExperimentKind::Positivity: return 0.99;
        case ExperimentKind::Divergence: return 0.5;
        default: return 0.0;
    }
}

inline double pass_threshold_of(const ExperimentConfig& c) {
    return c.pass_threshold.value_or(default_pass_threshold(c.experiment));
}

/// Column label fragment for a real parameter, e.g. 0.51 -> "0.51".
inline std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

/// Growth checkpoints actually used: configured ones below N, then N.
inline std::vector<std::uint32_t> growth_checkpoints(const ExperimentConfig& c) {
    std::vector<std::uint32_t> cps;
    for (const auto cp : c.checkpoints) {
        if (cp >= GrowthTracker::kStart && cp < c.limit) cps.push_back(cp);
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    cps.push_back(c.limit);
    return cps;
}

inline void validate(const ExperimentConfig& c) {
    auto fail = [&](const std::string& msg) {
        throw InvalidArgument(std::string(to_string(c.experiment)) + ": " + msg);
    };
    if (c.trials < 1) fail("trials must be >= 1");
    if (c.limit < 1) fail("limit must be >= 1");
    if (c.assignment_mode == SignMode::Explicit) fail("explicit assignments are not supported");
    auto require_grid = [&](double lo, double hi) {
        if (c.sigma_grid.empty()) fail("sigma grid is required");
        for (std::size_t i = 0; i < c.sigma_grid.size(); ++i) {
            const double s = c.sigma_grid[i];
            if (!(s > lo && s <= hi)) {
                fail("sigma " + format_double(s) + " outside (" + label(lo) + ", " + label(hi) + "]");
            }
            if (i > 0 && !(s < c.sigma_grid[i - 1])) fail("sigma grid must be strictly decreasing");
        }
    };
    auto require_prime_limit = [&] {
        if (!c.prime_limit || *c.prime_limit < 2) fail("prime limit is required (>= 2)");
        if (*c.prime_limit > SpfTable::kMaxLimit) fail("prime limit too large");
    };
    switch (c.experiment) {
        case ExperimentKind::SignChanges:
            if (!(c.alpha >= 0.0 && c.alpha <= 0.5)) fail("alpha must lie in [0, 1/2]");
            break;
        case ExperimentKind::Positivity:
            if (c.model != Model::FStar || c.alpha != 1.0) fail("requires model fstar and alpha = 1");
            break;
        case ExperimentKind::HarperScan:
            require_grid(0.5, 0.6);
            require_prime_limit();
            break;
        case ExperimentKind::Divergence:
            if (!(c.alpha >= 0.0 && c.alpha <= 0.5)) fail("alpha must lie in [0, 1/2]");
            require_grid(std::max(0.5, c.alpha), 0.7);
            require_prime_limit();
            break;
        case ExperimentKind::Growth:
            if (c.model != Model::F || c.alpha != 0.0) fail("requires model f and alpha = 0");
            if (c.limit < GrowthTracker::kStart) fail("limit must be >= 16");
            if (c.thetas.empty()) fail("at least one theta is required");
            break;
    }
}

/// Column names of the per-trial records (after "trial,seed").
inline std::vector<std::string> record_columns(const ExperimentConfig& c) {
    std::vector<std::string> cols;
    switch (c.experiment) {
        case ExperimentKind::SignChanges:
            cols = {"sign_changes", "last_crossing", "max_abs", "argmax"};
            if (!is_reporting_only(c)) cols.push_back("passed");
            break;
        case ExperimentKind::Positivity:
            cols = {"positive", "min_value", "argmin"};
            break;
        case ExperimentKind::HarperScan:
            for (const double s : c.sigma_grid) {
                cols.push_back("sup_" + label(s));
                cols.push_back("centered_" + label(s));
                cols.push_back("t_star_" + label(s));
            }
            break;
        case ExperimentKind::Divergence:
            for (const double s : c.sigma_grid) {
                cols.push_back("signed_" + label(s));
                cols.push_back("absolute_" + label(s));
                cols.push_back("witness_" + label(s));
                cols.push_back("ratio_" + label(s));
            }
            cols.push_back("ratio_increasing");
            cols.push_back("triangle_ok");
            break;
        case ExperimentKind::Growth:
            for (const auto cp : growth_checkpoints(c)) {
                for (const double th : c.thetas) {
                    cols.push_back("growth_theta" + label(th) + "_N" + std::to_string(cp));
                }
            }
            break;
    }
    return cols;
}

struct TrialRecord {
    std::uint32_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // aligned with AggregateStats::columns
};

struct Summary {
    double mean = 0.0;
    double median = 0.0;
    double q05 = 0.0;
    double q95 = 0.0;
};

/// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return std::nan("");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline Summary summarize(std::vector<double> values) {
    Summary s;
    if (values.empty()) return s;
    double total = 0.0;
    for (const double v : values) total += v;
    s.mean = total / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    s.median = quantile_sorted(values, 0.5);
    s.q05 = quantile_sorted(values, 0.05);
    s.q95 = quantile_sorted(values, 0.95);
    return s;
}

struct AggregateStats {
    ExperimentConfig config;
    std::vector<std::string> columns;
    std::vector<TrialRecord> trials;

    /// Scalar statistic summarized in `summary`.
    std::string statistic;
    Summary summary;
    std::optional<double> pass_fraction;
    /// Whether pass_fraction meets the configured expectation; unset when
    /// the experiment is reporting-only.
    std::optional<bool> expectation_met;
    bool reporting_only = false;
    /// Named derived numbers (per-sigma medians, trend indicators, quantiles).
    std::map<std::string, double> extras;
    double wall_time = 0.0;

    std::vector<double> column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) throw InvalidArgument("no column '" + name + "'");
        const auto idx = static_cast<std::size_t>(it - columns.begin());
        std::vector<double> out;
        out.reserve(trials.size());
        for (const auto& t : trials) out.push_back(t.values[idx]);
        return out;
    }
};

inline double mean_of(const std::vector<double>& v) {
    double total = 0.0;
    for (const double x : v) total += x;
    return v.empty() ? 0.0 : total / static_cast<double>(v.size());
}

/// Fills statistic / summary / pass_fraction / extras from the records.
inline void finalize_summary(AggregateStats& st) {
    const ExperimentConfig& c = st.config;
    st.reporting_only = is_reporting_only(c);
    st.extras.clear();
    st.pass_fraction.reset();
    st.expectation_met.reset();
    const double threshold = pass_threshold_of(c);
    switch (c.experiment) {
        case ExperimentKind::SignChanges:
            st.statistic = "sign_changes";
            if (!st.reporting_only) {
                st.pass_fraction = mean_of(st.column("passed"));
                st.expectation_met = *st.pass_fraction >= threshold;
            }
            st.extras["min_sign_changes"] = c.min_sign_changes;
            break;
        case ExperimentKind::Positivity:
            st.statistic = "min_value";
            st.pass_fraction = mean_of(st.column("positive"));
            st.expectation_met = *st.pass_fraction >= threshold;
            break;
        case ExperimentKind::HarperScan: {
            st.statistic = "centered_" + label(c.sigma_grid.back());
            std::vector<double> medians;
            for (const double s : c.sigma_grid) {
                medians.push_back(summarize(st.column("centered_" + label(s))).median);
                st.extras["median_centered_" + label(s)] = medians.back();
            }
            double increasing = 0;
            for (std::size_t i = 1; i < medians.size(); ++i) {
                if (medians[i] > medians[i - 1]) increasing += 1;
            }
            st.extras["trend_steps_increasing"] = increasing;
            st.extras["trend_steps_total"] = static_cast<double>(medians.size() - 1);
            st.expectation_met = increasing == static_cast<double>(medians.size() - 1);
            break;
        }
        case ExperimentKind::Divergence:
            st.statistic = "ratio_" + label(c.sigma_grid.back());
            st.pass_fraction = mean_of(st.column("ratio_increasing"));
            st.expectation_met = *st.pass_fraction > threshold;
            {
                const auto tri = st.column("triangle_ok");
                st.extras["triangle_all"] = *std::min_element(tri.begin(), tri.end());
            }
            break;
        case ExperimentKind::Growth:
            st.statistic = "growth_theta" + label(c.thetas.size() > 1 ? c.thetas[1] : c.thetas[0]) +
                           "_N" + std::to_string(c.limit);
            for (const auto& col : st.columns) st.extras["q95_" + col] = summarize(st.column(col)).q95;
            break;
    }
    st.summary = summarize(st.column(st.statistic));
}

/// Read-only tables shared by all trials of one experiment.
struct ExperimentContext {
    std::shared_ptr<const SpfTable> table;
    std::shared_ptr<const PrimeList> primes;
    std::shared_ptr<const PowerTable> weights;

    explicit ExperimentContext(const ExperimentConfig& c) {
        std::uint64_t sieve = std::max<std::uint64_t>(c.limit, 2);
        if (c.prime_limit) sieve = std::max<std::uint64_t>(sieve, *c.prime_limit);
        table = std::make_shared<const SpfTable>(sieve);
        primes = std::make_shared<const PrimeList>(*table);
        weights = std::make_shared<const PowerTable>(c.alpha, c.limit);
    }
};

namespace detail {

/// Tracks min over x >= 1 and positivity over x >= 2.
class PositivityTracker {
public:
    void push(std::uint32_t x, double value) {
        if (argmin_ == 0 || value < min_) {
            min_ = value;
            argmin_ = x;
        }
        if (x >= 2 && !(value > 0.0)) positive_ = false;
    }
    bool positive() const noexcept { return positive_; }
    double min() const noexcept { return min_; }
    std::uint32_t argmin() const noexcept { return argmin_; }

private:
    bool positive_ = true;
    double min_ = 0.0;
    std::uint32_t argmin_ = 0;
};

inline std::vector<std::int8_t> trial_values(const ExperimentConfig& c, const ExperimentContext& ctx,
                                             const SignAssignment& a) {
    const PrimeSignTable signs(a, *ctx.table, std::max<std::uint32_t>(c.limit, 2));
    std::vector<std::int8_t> g(c.limit);
    fill_function_values(*ctx.table, signs, c.model, g);
    return g;
}

}  // namespace detail

/// Record of trial `index`; depends only on (config, index).
inline TrialRecord run_trial(const ExperimentConfig& c, const ExperimentContext& ctx,
                             std::uint32_t index) {
    TrialRecord rec;
    rec.trial = index;
    rec.seed = trial_seed_of(c, index);
    const SignAssignment a = trial_assignment(c, index);
    auto& out = rec.values;
    switch (c.experiment) {
        case ExperimentKind::SignChanges: {
            const auto g = detail::trial_values(c, ctx, a);
            SignChangeTracker changes(false);
            ExtremesTracker extremes;
            stream_series(g, ctx.weights->weights(), changes, extremes);
            out = {static_cast<double>(changes.count()), static_cast<double>(changes.last_position()),
                   extremes.max_abs(), static_cast<double>(extremes.argmax())};
            if (!is_reporting_only(c)) out.push_back(changes.count() >= c.min_sign_changes ? 1.0 : 0.0);
            break;
        }
        case ExperimentKind::Positivity: {
            const auto g = detail::trial_values(c, ctx, a);
            detail::PositivityTracker pos;
            stream_series(g, ctx.weights->weights(), pos);
            out = {pos.positive() ? 1.0 : 0.0, pos.min(), static_cast<double>(pos.argmin())};
            break;
        }
        case ExperimentKind::HarperScan:
            for (const double s : c.sigma_grid) {
                const double step = c.grid_step > 0.0 ? c.grid_step : harper_default_grid_step(s);
                const auto r = harper_sup_statistic(a, s, step, *c.prime_limit, *ctx.primes, 1);
                out.push_back(r.sup_value);
                out.push_back(r.centered_value);
                out.push_back(r.t_star);
            }
            break;
        case ExperimentKind::Divergence: {
            const auto g = detail::trial_values(c, ctx, a);
            std::vector<double> values(c.limit);
            double sum = 0.0;
            const auto w = ctx.weights->weights();
            for (std::uint32_t x = 1; x <= c.limit; ++x) {
                sum += static_cast<double>(g[x - 1]) * w[x - 1];
                values[x - 1] = sum;
            }
            const auto series = WeightedSumSeries::from_values(c.model, c.alpha, std::move(values));
            const auto rows =
                divergence_comparison(a, series, c.sigma_grid, *c.prime_limit, *ctx.primes, c.grid_step);
            bool triangle = true;
            for (const auto& r : rows) {
                out.push_back(r.signed_integral);
                out.push_back(r.absolute);
                out.push_back(r.harper_witness);
                out.push_back(r.ratio());
                if (!(r.absolute >= r.signed_integral && r.absolute >= std::abs(r.signed_integral))) {
                    triangle = false;
                }
            }
            out.push_back(ratio_increases_toward_half(rows) ? 1.0 : 0.0);
            out.push_back(triangle ? 1.0 : 0.0);
            break;
        }
        case ExperimentKind::Growth: {
            const auto g = detail::trial_values(c, ctx, a);
            GrowthTracker growth(c.thetas, growth_checkpoints(c));
            stream_series(g, ctx.weights->weights(), growth);
            for (const auto& snap : growth.snapshots()) out.insert(out.end(), snap.begin(), snap.end());
            break;
        }
    }
    return rec;
}

inline AggregateStats run_experiment(const ExperimentConfig& config,
                                     const ExperimentContext* shared_ctx = nullptr) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    std::unique_ptr<ExperimentContext> own;
    if (shared_ctx == nullptr) {
        own = std::make_unique<ExperimentContext>(config);
        shared_ctx = own.get();
    }
    AggregateStats st;
    st.config = config;
    st.columns = record_columns(config);
    st.trials.resize(config.trials);
    parallel_for(config.trials, resolve_threads(config.threads), [&](std::size_t i) {
        st.trials[i] = run_trial(config, *shared_ctx, static_cast<std::uint32_t>(i));
    });
    finalize_summary(st);
    st.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return st;
}

inline void require_kind(const ExperimentConfig& c, ExperimentKind k) {
    if (c.experiment != k) {
        throw InvalidArgument(std::string("expected a ") + to_string(k) + " config, got " +
                              to_string(c.experiment));
    }
}

inline AggregateStats run_sign_change_experiment(const ExperimentConfig& c) {
    require_kind(c, ExperimentKind::SignChanges);
    return run_experiment(c);
}

inline AggregateStats run_positivity_experiment(const ExperimentConfig& c) {
    require_kind(c, ExperimentKind::Positivity);
    return run_experiment(c);
}

inline AggregateStats run_harper_scan(const ExperimentConfig& c) {
    require_kind(c, ExperimentKind::HarperScan);
    return run_experiment(c);
}

inline AggregateStats run_divergence_comparison(const ExperimentConfig& c) {
    require_kind(c, ExperimentKind::Divergence);
    return run_experiment(c);
}

inline AggregateStats run_growth_experiment(const ExperimentConfig& c) {
    require_kind(c, ExperimentKind::Growth);
    return run_experiment(c);
}

}  // namespace rmf

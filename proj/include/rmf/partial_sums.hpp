#pragma once

/// \file
/// Weighted partial sums M_alpha(x) = sum_{n <= x} g(n) / n^alpha for
/// g in {f, f*}, sign-change detection, the Riesz mean and the growth
/// statistic.
///
/// M_alpha is a right-continuous step function constant on [n, n+1), so all
/// quantities are computed at integer x only. Summation runs in ascending n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rmf/csv.hpp"
#include "rmf/errors.hpp"
#include "rmf/prime_engine.hpp"
#include "rmf/sampler.hpp"

namespace rmf {

/// n^{-alpha}, with exact fast paths for the exponents used most.
inline double inverse_power(std::uint64_t n, double alpha) {
    const auto x = static_cast<double>(n);
    if (alpha == 0.0) return 1.0;
    if (alpha == 1.0) return 1.0 / x;
    if (alpha == 0.5) return 1.0 / std::sqrt(x);
    return std::pow(x, -alpha);
}

inline void require_alpha(double alpha, const char* op) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidArgument(std::string(op) + ": alpha must lie in [0, 1], got " +
                              format_double(alpha));
    }
}

/// Table of n^{-alpha} for n = 1..N, shared read-only across Monte Carlo trials.
class PowerTable {
public:
    PowerTable(double alpha, std::uint32_t limit) : alpha_(alpha), weights_(limit) {
        require_alpha(alpha, "PowerTable");
        for (std::uint32_t n = 1; n <= limit; ++n) weights_[n - 1] = inverse_power(n, alpha);
    }

    double alpha() const noexcept { return alpha_; }
    std::uint32_t limit() const noexcept { return static_cast<std::uint32_t>(weights_.size()); }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    double alpha_;
    std::vector<double> weights_;
};

enum class Summation { Ascending, Compensated };

/// Values M_alpha(1..N) held in memory, with running extremes.
struct WeightedSumSeries {
    Model model = Model::F;
    double alpha = 0.0;
    std::uint32_t limit = 0;
    std::vector<double> values;  // values[x-1] = M_alpha(x)
    double max_abs = 0.0;
    std::uint32_t argmax = 0;

    double at(std::uint32_t x) const { return values.at(x - 1); }

    /// Wraps externally produced values (synthetic series, replays).
    static WeightedSumSeries from_values(Model model, double alpha, std::vector<double> values) {
        WeightedSumSeries s;
        s.model = model;
        s.alpha = alpha;
        s.limit = static_cast<std::uint32_t>(values.size());
        s.values = std::move(values);
        s.refresh_extremes();
        return s;
    }

    void refresh_extremes() {
        max_abs = 0.0;
        argmax = 0;
        for (std::uint32_t x = 1; x <= limit; ++x) {
            const double a = std::abs(values[x - 1]);
            if (argmax == 0 || a > max_abs) {
                max_abs = a;
                argmax = x;
            }
        }
    }
};

/// Streams M_alpha(x), x = 1..g.size(), into each observer via observer.push(x, M).
template <class... Observers>
void stream_series(std::span<const std::int8_t> g, std::span<const double> weights,
                   Observers&... observers) {
    double sum = 0.0;
    const auto n = static_cast<std::uint32_t>(g.size());
    for (std::uint32_t x = 1; x <= n; ++x) {
        sum += static_cast<double>(g[x - 1]) * weights[x - 1];
        (observers.push(x, sum), ...);
    }
}

inline WeightedSumSeries compute_series(const SignAssignment& assignment, Model model, double alpha,
                                        std::uint32_t limit, const SpfTable& table,
                                        Summation mode = Summation::Ascending) {
    require_alpha(alpha, "compute_series");
    if (limit < 1) throw InvalidArgument("compute_series: limit must be >= 1");
    if (limit > table.limit()) {
        throw InvalidArgument("compute_series: sieve limit " + std::to_string(table.limit()) +
                              " does not cover " + std::to_string(limit));
    }
    const PrimeSignTable signs(assignment, table, std::max<std::uint32_t>(limit, 2));
    std::vector<std::int8_t> g(limit);
    fill_function_values(table, signs, model, g);

    std::vector<double> values(limit);
    if (mode == Summation::Ascending) {
        double sum = 0.0;
        for (std::uint32_t x = 1; x <= limit; ++x) {
            sum += static_cast<double>(g[x - 1]) * inverse_power(x, alpha);
            values[x - 1] = sum;
        }
    } else {
        // Neumaier's variant of Kahan summation.
        double sum = 0.0;
        double comp = 0.0;
        for (std::uint32_t x = 1; x <= limit; ++x) {
            const double term = static_cast<double>(g[x - 1]) * inverse_power(x, alpha);
            const double t = sum + term;
            if (std::abs(sum) >= std::abs(term)) {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            values[x - 1] = sum + comp;
        }
    }
    return WeightedSumSeries::from_values(model, alpha, std::move(values));
}

inline int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

/// Positions where the series crosses between strictly positive and
/// strictly negative values.
struct SignChangeLog {
    std::vector<std::uint32_t> positions;
    std::vector<int> signs_after;
    int first_sign = 0;  // 0 when the series is identically zero

    std::size_t count() const noexcept { return positions.size(); }
};

/// Streaming form of detect_sign_changes. With keep_positions = false only
/// the count and the last crossing are retained.
class SignChangeTracker {
public:
    explicit SignChangeTracker(bool keep_positions = true) : keep_(keep_positions) {}

    void push(std::uint32_t x, double value) {
        const int s = sign_of(value);
        if (s == 0) return;
        if (last_sign_ == 0) {
            log_.first_sign = s;
        } else if (s != last_sign_) {
            ++count_;
            last_position_ = x;
            if (keep_) {
                log_.positions.push_back(x);
                log_.signs_after.push_back(s);
            }
        }
        last_sign_ = s;
    }

    std::size_t count() const noexcept { return count_; }
    std::uint32_t last_position() const noexcept { return last_position_; }
    int first_sign() const noexcept { return log_.first_sign; }
    const SignChangeLog& log() const noexcept { return log_; }

private:
    bool keep_;
    int last_sign_ = 0;
    std::size_t count_ = 0;
    std::uint32_t last_position_ = 0;
    SignChangeLog log_;
};

/// values[i] is the series at x = i + 1.
inline SignChangeLog detect_sign_changes(std::span<const double> values) {
    SignChangeTracker tracker;
    for (std::size_t i = 0; i < values.size(); ++i) {
        tracker.push(static_cast<std::uint32_t>(i + 1), values[i]);
    }
    return tracker.log();
}

inline SignChangeLog detect_sign_changes(const WeightedSumSeries& series) {
    if (series.values.empty()) throw InvalidArgument("detect_sign_changes: empty series");
    return detect_sign_changes(std::span<const double>(series.values));
}

/// sum_{n <= x} (f(n) / sqrt(n)) log(x / n).
inline double riesz_mean(const SignAssignment& assignment, std::uint32_t x, const SpfTable& table) {
    if (x < 1) throw InvalidArgument("riesz_mean: x must be >= 1");
    const MultiplicativeEvaluator eval(assignment, table);
    table.require_in_range(x, "riesz_mean");
    double sum = 0.0;
    for (std::uint32_t n = 1; n <= x; ++n) {
        const int fn = eval.evaluate_f(n);
        if (fn == 0) continue;
        sum += fn / std::sqrt(static_cast<double>(n)) *
               std::log(static_cast<double>(x) / static_cast<double>(n));
    }
    return sum;
}

/// Normaliser sqrt(x) (log log x)^theta used by the growth statistic.
inline double growth_normalizer(std::uint32_t x, double theta) {
    const double xd = x;
    return std::sqrt(xd) * std::pow(std::log(std::log(xd)), theta);
}

/// Running max over 16 <= x of |M_0(x)| / (sqrt(x) (log log x)^theta) for
/// several theta at once, with snapshots at requested checkpoints.
class GrowthTracker {
public:
    static constexpr std::uint32_t kStart = 16;

    GrowthTracker(std::vector<double> thetas, std::vector<std::uint32_t> checkpoints = {})
        : thetas_(std::move(thetas)),
          checkpoints_(std::move(checkpoints)),
          maxima_(thetas_.size(), 0.0) {
        std::sort(checkpoints_.begin(), checkpoints_.end());
    }

    void push(std::uint32_t x, double value) {
        if (x >= kStart) {
            const double a = std::abs(value);
            const double root = std::sqrt(static_cast<double>(x));
            const double loglog = std::log(std::log(static_cast<double>(x)));
            for (std::size_t i = 0; i < thetas_.size(); ++i) {
                const double r = a / (root * std::pow(loglog, thetas_[i]));
                if (r > maxima_[i]) maxima_[i] = r;
            }
        }
        if (next_ < checkpoints_.size() && checkpoints_[next_] == x) {
            snapshots_.push_back(maxima_);
            ++next_;
        }
    }

    const std::vector<double>& maxima() const noexcept { return maxima_; }
    /// snapshots()[k][i]: statistic for thetas[i] over [16, checkpoints[k]].
    const std::vector<std::vector<double>>& snapshots() const noexcept { return snapshots_; }

private:
    std::vector<double> thetas_;
    std::vector<std::uint32_t> checkpoints_;
    std::vector<double> maxima_;
    std::vector<std::vector<double>> snapshots_;
    std::size_t next_ = 0;
};

inline double growth_statistic(const WeightedSumSeries& series, double theta) {
    if (series.alpha != 0.0) {
        throw InvalidArgument("growth_statistic: series must have alpha = 0, got " +
                              format_double(series.alpha));
    }
    if (series.limit < GrowthTracker::kStart) {
        throw InvalidArgument("growth_statistic: limit must be >= 16, got " +
                              std::to_string(series.limit));
    }
    GrowthTracker tracker({theta});
    for (std::uint32_t x = 1; x <= series.limit; ++x) tracker.push(x, series.values[x - 1]);
    return tracker.maxima()[0];
}

/// Running extremes of the series.
class ExtremesTracker {
public:
    void push(std::uint32_t x, double value) {
        const double a = std::abs(value);
        if (argmax_ == 0 || a > max_abs_) {
            max_abs_ = a;
            argmax_ = x;
        }
        if (argmin_ == 0 || value < min_) {
            min_ = value;
            argmin_ = x;
        }
    }

    double max_abs() const noexcept { return max_abs_; }
    std::uint32_t argmax() const noexcept { return argmax_; }
    double min() const noexcept { return min_; }
    std::uint32_t argmin() const noexcept { return argmin_; }

private:
    double max_abs_ = 0.0;
    std::uint32_t argmax_ = 0;
    double min_ = 0.0;
    std::uint32_t argmin_ = 0;
};

inline std::string series_to_csv(const WeightedSumSeries& series) {
    CsvBuilder csv({"x", "value"});
    for (std::uint32_t x = 1; x <= series.limit; ++x) {
        csv.field(x).field(series.values[x - 1]).end_row();
    }
    return csv.str();
}

inline std::string sign_changes_to_csv(const SignChangeLog& log) {
    CsvBuilder csv({"position", "sign_after"});
    for (std::size_t i = 0; i < log.positions.size(); ++i) {
        csv.field(log.positions[i]).field(log.signs_after[i]).end_row();
    }
    return csv.str();
}

}  // namespace rmf

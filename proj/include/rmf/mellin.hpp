#pragma once

/// \file
/// Mellin-type integrals of the step functions M_alpha(x) and the truncated
/// partial-summation identity
///
///   sum_{n<=N} g(n) n^{-s} = (s - alpha) int_1^N M_alpha(x) x^{-(s+1-alpha)} dx
///                            + M_alpha(N) N^{-(s-alpha)},        Re s > alpha.
///
/// Because M_alpha is constant on [n, n+1), every integral is a finite sum of
/// closed-form pieces
///
///   (s - alpha) int_n^{n+1} x^{-(s+1-alpha)} dx = n^{-u} - (n+1)^{-u},  u = s - alpha,
///
/// evaluated as -n^{-u} expm1(-u log1p(1/n)) to avoid cancellation. There is
/// no quadrature error.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmf/csv.hpp"
#include "rmf/dirichlet.hpp"
#include "rmf/errors.hpp"
#include "rmf/partial_sums.hpp"

namespace rmf {

namespace detail {

inline std::complex<double> complex_expm1(std::complex<double> z) {
    const double a = z.real();
    const double b = z.imag();
    const double half_sin = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * half_sin * half_sin, std::exp(a) * std::sin(b)};
}

/// n^{-u} - (n+1)^{-u}
inline std::complex<double> interval_weight(std::uint32_t n, std::complex<double> u) {
    const double nd = n;
    const std::complex<double> head = std::exp(-u * std::log(nd));
    return -head * complex_expm1(-u * std::log1p(1.0 / nd));
}

/// (n^{-u} - (n+1)^{-u}) / u = int_n^{n+1} x^{-(u+1)} dx, real u > 0.
inline double interval_kernel(std::uint32_t n, double u) {
    const double nd = n;
    return -std::pow(nd, -u) * std::expm1(-u * std::log1p(1.0 / nd)) / u;
}

inline void require_convergent_kernel(double re_s, double alpha, const char* op) {
    if (!(re_s > alpha)) {
        throw DomainError(std::string(op) + ": divergent kernel, need Re s > alpha (Re s = " +
                          format_double(re_s) + ", alpha = " + format_double(alpha) + ")");
    }
}

}  // namespace detail

/// (s - alpha) int_1^N M_alpha(x) x^{-(s+1-alpha)} dx, exact up to rounding.
inline std::complex<double> mellin_step_integral(const WeightedSumSeries& series, ComplexPoint s) {
    detail::require_convergent_kernel(s.sigma, series.alpha, "mellin_step_integral");
    const std::complex<double> u = s.value() - series.alpha;
    std::complex<double> sum = 0.0;
    for (std::uint32_t n = 1; n < series.limit; ++n) {
        const double m = series.values[n - 1];
        if (m == 0.0) continue;
        sum += m * detail::interval_weight(n, u);
    }
    return sum;
}

/// int_1^N M_alpha(x) x^{-(sigma+1-alpha)} dx at real sigma, without the
/// (sigma - alpha) prefactor.
inline double signed_mellin_integral(const WeightedSumSeries& series, double sigma) {
    detail::require_convergent_kernel(sigma, series.alpha, "signed_mellin_integral");
    const double u = sigma - series.alpha;
    double sum = 0.0;
    for (std::uint32_t n = 1; n < series.limit; ++n) {
        sum += series.values[n - 1] * detail::interval_kernel(n, u);
    }
    return sum;
}

/// int_1^N |M_alpha(x)| x^{-(sigma+1-alpha)} dx, without prefactor.
inline double abs_mellin_integral(const WeightedSumSeries& series, double sigma) {
    detail::require_convergent_kernel(sigma, series.alpha, "abs_mellin_integral");
    const double u = sigma - series.alpha;
    double sum = 0.0;
    for (std::uint32_t n = 1; n < series.limit; ++n) {
        sum += std::abs(series.values[n - 1]) * detail::interval_kernel(n, u);
    }
    return sum;
}

/// sum_{n<=N} g(n) n^{-s}, ascending n.
inline std::complex<double> truncated_dirichlet_sum(const SignAssignment& assignment, Model model,
                                                    ComplexPoint s, std::uint32_t limit,
                                                    const SpfTable& table) {
    const PrimeSignTable signs(assignment, table, std::max<std::uint32_t>(limit, 2));
    std::vector<std::int8_t> g(limit);
    fill_function_values(table, signs, model, g);
    std::complex<double> sum = 0.0;
    const std::complex<double> sv = s.value();
    for (std::uint32_t n = 1; n <= limit; ++n) {
        if (g[n - 1] == 0) continue;
        sum += static_cast<double>(g[n - 1]) * std::exp(-sv * std::log(static_cast<double>(n)));
    }
    return sum;
}

struct MellinEvaluation {
    ComplexPoint s;
    double alpha = 0.0;
    std::uint32_t limit = 0;
    std::complex<double> signed_integral;  // includes the (s - alpha) prefactor
    std::complex<double> boundary_term;    // M_alpha(N) N^{-(s - alpha)}
    std::complex<double> dirichlet_sum;    // sum_{n<=N} g(n) n^{-s}
    std::optional<double> abs_integral;    // real s only, without prefactor
    double residual = 0.0;                 // |dirichlet_sum - signed_integral - boundary_term|
};

inline MellinEvaluation evaluate_mellin(const SignAssignment& assignment, Model model, double alpha,
                                        ComplexPoint s, std::uint32_t limit,
                                        const SpfTable& table) {
    detail::require_convergent_kernel(s.sigma, alpha, "truncated_identity_residual");
    const WeightedSumSeries series = compute_series(assignment, model, alpha, limit, table);
    MellinEvaluation ev;
    ev.s = s;
    ev.alpha = alpha;
    ev.limit = limit;
    ev.signed_integral = mellin_step_integral(series, s);
    const std::complex<double> u = s.value() - alpha;
    ev.boundary_term = series.values.back() * std::exp(-u * std::log(static_cast<double>(limit)));
    ev.dirichlet_sum = truncated_dirichlet_sum(assignment, model, s, limit, table);
    if (s.t == 0.0) ev.abs_integral = abs_mellin_integral(series, s.sigma);
    ev.residual = std::abs(ev.dirichlet_sum - (ev.signed_integral + ev.boundary_term));
    return ev;
}

/// |sum_{n<=N} g(n) n^{-s} - [mellin_step_integral + M_alpha(N) N^{-(s-alpha)}]|.
/// The identity is exact, so this measures rounding only.
inline double truncated_identity_residual(const SignAssignment& assignment, Model model,
                                          double alpha, ComplexPoint s, std::uint32_t limit,
                                          const SpfTable& table) {
    return evaluate_mellin(assignment, model, alpha, s, limit, table).residual;
}

// ---------------------------------------------------------------------------

struct DivergenceRow {
    double sigma = 0.0;
    double signed_integral = 0.0;  // without prefactor
    double absolute = 0.0;         // without prefactor
    double harper_witness = 0.0;   // |F(sigma + i t*)| / t*
    double t_star = 0.0;
    std::uint32_t limit = 0;
    std::uint64_t prime_limit = 0;
    std::uint64_t seed = 0;

    /// absolute / |signed|; >= 1, and == 1 exactly for single-signed series.
    double ratio() const noexcept { return absolute / std::abs(signed_integral); }
};

inline void require_divergence_grid(std::span<const double> grid, double alpha) {
    if (grid.empty()) throw InvalidArgument("divergence_comparison: empty sigma grid");
    const double lo = std::max(alpha, 0.5);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > lo && grid[i] <= 0.7)) {
            throw InvalidArgument("divergence_comparison: sigma " + format_double(grid[i]) +
                                  " outside (" + format_double(lo) + ", 0.7]");
        }
        if (i > 0 && !(grid[i] < grid[i - 1])) {
            throw InvalidArgument("divergence_comparison: sigma grid must be strictly decreasing");
        }
    }
}

/// Signed and absolute Mellin integrals of one realization across a grid of
/// real sigma decreasing toward 1/2, plus the witness |F(sigma + i t*)| / t*
/// where t* maximizes the prime cosine sum over [1, 2 log^2(1/(sigma-1/2))].
/// `series` must come from `assignment`.
inline std::vector<DivergenceRow> divergence_comparison(const SignAssignment& assignment,
                                                        const WeightedSumSeries& series,
                                                        std::span<const double> sigma_grid,
                                                        std::uint64_t prime_limit,
                                                        const PrimeList& primes,
                                                        double grid_step = 0.0) {
    require_divergence_grid(sigma_grid, series.alpha);
    std::vector<DivergenceRow> rows;
    rows.reserve(sigma_grid.size());
    for (const double sigma : sigma_grid) {
        DivergenceRow row;
        row.sigma = sigma;
        row.signed_integral = signed_mellin_integral(series, sigma);
        row.absolute = abs_mellin_integral(series, sigma);
        const double step = grid_step > 0.0 ? grid_step : harper_default_grid_step(sigma);
        const HarperScanResult scan =
            detail::harper_scan(assignment, sigma, step, prime_limit, primes, 1);
        row.t_star = scan.t_star;
        const EulerProduct product =
            euler_product(series.model, assignment, {sigma, scan.t_star}, prime_limit, primes);
        row.harper_witness = std::abs(product.value) / scan.t_star;
        row.limit = series.limit;
        row.prime_limit = prime_limit;
        row.seed = assignment.seed();
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<DivergenceRow> divergence_comparison(const SignAssignment& assignment,
                                                        Model model, double alpha,
                                                        std::span<const double> sigma_grid,
                                                        std::uint32_t limit,
                                                        std::uint64_t prime_limit,
                                                        const SpfTable& table,
                                                        const PrimeList& primes) {
    require_divergence_grid(sigma_grid, alpha);
    const WeightedSumSeries series = compute_series(assignment, model, alpha, limit, table);
    return divergence_comparison(assignment, series, sigma_grid, prime_limit, primes);
}

/// True when the ratio absolute/|signed| strictly increases along the rows
/// (rows ordered by decreasing sigma).
inline bool ratio_increases_toward_half(std::span<const DivergenceRow> rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].ratio() > rows[i - 1].ratio())) return false;
    }
    return !rows.empty();
}

inline std::string divergence_to_csv(std::span<const DivergenceRow> rows) {
    CsvBuilder csv({"sigma", "signed", "absolute", "harper_witness", "N", "prime_limit", "seed"});
    for (const auto& r : rows) {
        csv.field(r.sigma)
            .field(r.signed_integral)
            .field(r.absolute)
            .field(r.harper_witness)
            .field(r.limit)
            .field(r.prime_limit)
            .field(r.seed)
            .end_row();
    }
    return csv.str();
}

}  // namespace rmf

#pragma once

/// \file
/// Truncated Euler products of the random Dirichlet series
///
///   F(s)  = prod_p (1 + f(p) p^{-s}),      F*(s) = prod_p (1 - f(p) p^{-s})^{-1},
///
/// prime sums sum_p f(p) cos(t log p) p^{-sigma}, the residual of the
/// exponential formulas log F(s) = P(s) -/+ (1/2) log zeta(2s) + O(1), and the
/// large-values scan sup_t sum_p f(p) cos(t log p) p^{-sigma} over
/// t in [1, 2 log^2(1/(sigma - 1/2))].
///
/// Every infinite product or sum is truncated at p <= prime_limit and the
/// limit is carried in the results.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rmf/csv.hpp"
#include "rmf/errors.hpp"
#include "rmf/parallel.hpp"
#include "rmf/prime_engine.hpp"
#include "rmf/sampler.hpp"
#include "rmf/zeta.hpp"

namespace rmf {

/// s = sigma + i t.
struct ComplexPoint {
    double sigma = 0.0;
    double t = 0.0;

    std::complex<double> value() const noexcept { return {sigma, t}; }
    ComplexPoint conj() const noexcept { return {sigma, -t}; }
};

inline void require_right_of_half(double sigma, const char* op) {
    if (!(sigma > 0.5)) {
        throw DomainError(std::string(op) + ": requires Re s > 1/2, got " + format_double(sigma));
    }
}

inline void require_prime_limit(std::uint64_t prime_limit, const char* op) {
    if (prime_limit < 2) throw InvalidArgument(std::string(op) + ": prime_limit must be >= 2");
}

struct EulerProduct {
    std::complex<double> value;
    /// Sum of principal logarithms of the factors.
    std::complex<double> log_value;
    /// |last factor - 1|, the convergence diagnostic.
    double last_factor_deviation = 0.0;
    std::uint32_t last_prime = 0;
    std::uint64_t prime_limit = 0;
};

namespace detail {

/// f(p) p^{-s}
inline std::complex<double> signed_prime_power(int sign, std::uint32_t p, ComplexPoint s) {
    const double logp = std::log(static_cast<double>(p));
    const double mag = std::pow(static_cast<double>(p), -s.sigma);
    const double angle = s.t * logp;
    return {sign * mag * std::cos(angle), -sign * mag * std::sin(angle)};
}

inline EulerProduct euler_product(const SignAssignment& assignment, ComplexPoint s,
                                  std::uint64_t prime_limit, const PrimeList& primes, Model model,
                                  const char* op) {
    require_right_of_half(s.sigma, op);
    require_prime_limit(prime_limit, op);
    EulerProduct out;
    out.value = 1.0;
    out.log_value = 0.0;
    out.prime_limit = prime_limit;
    for (const std::uint32_t p : primes.up_to(prime_limit)) {
        const std::complex<double> x = signed_prime_power(sign_at_prime(assignment, p), p, s);
        std::complex<double> factor;
        if (model == Model::F) {
            factor = 1.0 + x;
            out.log_value += std::log(factor);
        } else {
            const std::complex<double> denom = 1.0 - x;
            factor = 1.0 / denom;
            out.log_value -= std::log(denom);
        }
        out.value *= factor;
        out.last_factor_deviation = std::abs(factor - 1.0);
        out.last_prime = p;
    }
    return out;
}

}  // namespace detail

inline EulerProduct euler_product_F(const SignAssignment& assignment, ComplexPoint s,
                                    std::uint64_t prime_limit, const PrimeList& primes) {
    return detail::euler_product(assignment, s, prime_limit, primes, Model::F, "euler_product_F");
}

inline EulerProduct euler_product_F_star(const SignAssignment& assignment, ComplexPoint s,
                                         std::uint64_t prime_limit, const PrimeList& primes) {
    return detail::euler_product(assignment, s, prime_limit, primes, Model::FStar,
                                 "euler_product_F_star");
}

inline EulerProduct euler_product(Model model, const SignAssignment& assignment, ComplexPoint s,
                                  std::uint64_t prime_limit, const PrimeList& primes) {
    return model == Model::F ? euler_product_F(assignment, s, prime_limit, primes)
                             : euler_product_F_star(assignment, s, prime_limit, primes);
}

/// sum_{p <= prime_limit} f(p) cos(t log p) p^{-sigma}, ascending p.
inline double prime_cosine_sum(const SignAssignment& assignment, double sigma, double t,
                               std::uint64_t prime_limit, const PrimeList& primes) {
    require_right_of_half(sigma, "prime_cosine_sum");
    require_prime_limit(prime_limit, "prime_cosine_sum");
    double sum = 0.0;
    for (const std::uint32_t p : primes.up_to(prime_limit)) {
        const double logp = std::log(static_cast<double>(p));
        const double sign = sign_at_prime(assignment, p);
        sum += sign * std::cos(t * logp) * std::pow(static_cast<double>(p), -sigma);
    }
    return sum;
}

/// sum_{p <= prime_limit} f(p) p^{-sigma}.
inline double prime_sum_real(const SignAssignment& assignment, double sigma,
                             std::uint64_t prime_limit, const PrimeList& primes) {
    require_right_of_half(sigma, "prime_sum_real");
    return prime_cosine_sum(assignment, sigma, 0.0, prime_limit, primes);
}

/// sum_{p <= prime_limit} f(p) p^{-s} (complex).
inline std::complex<double> prime_sum(const SignAssignment& assignment, ComplexPoint s,
                                      std::uint64_t prime_limit, const PrimeList& primes) {
    std::complex<double> sum = 0.0;
    for (const std::uint32_t p : primes.up_to(prime_limit)) {
        sum += detail::signed_prime_power(sign_at_prime(assignment, p), p, s);
    }
    return sum;
}

/// log(Euler product) - (P(s) - (1/2) log zeta(2s))  for model F,
/// log(Euler product) - (P(s) + (1/2) log zeta(2s))  for model F*,
/// with log(Euler product) the sum of principal logs of the factors.
inline std::complex<double> exponential_formula_residual(const SignAssignment& assignment,
                                                         ComplexPoint s, std::uint64_t prime_limit,
                                                         const PrimeList& primes, Model model) {
    if (!(s.sigma >= 0.51)) {
        throw DomainError("exponential_formula_check: requires Re s >= 0.51, got " +
                          format_double(s.sigma));
    }
    if (prime_limit < 1000) {
        throw InvalidArgument("exponential_formula_check: prime_limit must be >= 1000");
    }
    const EulerProduct product = euler_product(model, assignment, s, prime_limit, primes);
    const std::complex<double> half_log_zeta = 0.5 * std::log(zeta(2.0 * s.value()));
    const std::complex<double> p_sum = prime_sum(assignment, s, prime_limit, primes);
    const std::complex<double> predicted =
        model == Model::F ? p_sum - half_log_zeta : p_sum + half_log_zeta;
    return product.log_value - predicted;
}

inline double exponential_formula_check(const SignAssignment& assignment, ComplexPoint s,
                                        std::uint64_t prime_limit, const PrimeList& primes,
                                        Model model) {
    return std::abs(exponential_formula_residual(assignment, s, prime_limit, primes, model));
}

// ---------------------------------------------------------------------------
// Large-values scan.

struct HarperScanResult {
    double sigma = 0.0;
    double t_star = 0.0;
    double sup_value = 0.0;
    double centered_value = 0.0;
    double grid_step = 0.0;
    std::uint64_t prime_limit = 0;
    double window_upper = 0.0;
    std::uint64_t grid_points = 0;
};

/// Upper end 2 (log(1/(sigma - 1/2)))^2 of the scan window.
inline double harper_window_upper(double sigma) {
    const double l = std::log(1.0 / (sigma - 0.5));
    return 2.0 * l * l;
}

/// Default spacing 0.01 / log(1/(sigma - 1/2)).
inline double harper_default_grid_step(double sigma) {
    return 0.01 / std::log(1.0 / (sigma - 0.5));
}

/// 2 log log(1/(sigma - 1/2)).
inline double harper_centering(double sigma) {
    return 2.0 * std::log(std::log(1.0 / (sigma - 0.5)));
}

namespace detail {

struct ScanPoint {
    std::uint64_t index = 0;
    double value = 0.0;
};

/// Max of sum_j w_j cos(t_k log p_j), t_k = t_lo + k h, k = 0..last.
///
/// Points are processed in fixed blocks. At a block start every cosine is
/// evaluated directly (with the same expression as prime_cosine_sum, so the
/// value there equals the direct sum bit for bit); inside a block the phases
/// advance by one complex rotation e^{i h log p} per step. Block boundaries
/// depend only on k, so the result does not depend on the thread count.
/// Ties go to the smallest k.
inline ScanPoint scan_cosine_max(std::span<const std::uint32_t> primes,
                                 std::span<const double> signs, double sigma, double t_lo,
                                 double h, std::uint64_t last, unsigned threads) {
    constexpr std::uint64_t kBlock = 256;
    const std::size_t np = primes.size();
    std::vector<double> logp(np), pw(np), rot_c(np), rot_s(np);
    for (std::size_t j = 0; j < np; ++j) {
        logp[j] = std::log(static_cast<double>(primes[j]));
        pw[j] = std::pow(static_cast<double>(primes[j]), -sigma);
        rot_c[j] = std::cos(h * logp[j]);
        rot_s[j] = std::sin(h * logp[j]);
    }
    const std::uint64_t blocks = last / kBlock + 1;
    std::vector<ScanPoint> best(blocks);

    parallel_for(blocks, threads, [&](std::size_t b) {
        std::vector<double> re(np), im(np);
        const std::uint64_t k0 = b * kBlock;
        const std::uint64_t k1 = std::min(last, k0 + kBlock - 1);
        const double t0 = t_lo + static_cast<double>(k0) * h;
        double direct = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double angle = t0 * logp[j];
            const double d = signs[j] * std::cos(angle) * pw[j];
            direct += d;
            re[j] = d;
            im[j] = signs[j] * std::sin(angle) * pw[j];
        }
        ScanPoint local{k0, direct};
        for (std::uint64_t k = k0 + 1; k <= k1; ++k) {
            double acc[4] = {0.0, 0.0, 0.0, 0.0};
            std::size_t j = 0;
            for (; j + 4 <= np; j += 4) {
                for (std::size_t l = 0; l < 4; ++l) {
                    const double r = re[j + l];
                    const double i = im[j + l];
                    const double nr = r * rot_c[j + l] - i * rot_s[j + l];
                    const double ni = r * rot_s[j + l] + i * rot_c[j + l];
                    re[j + l] = nr;
                    im[j + l] = ni;
                    acc[l] += nr;
                }
            }
            for (; j < np; ++j) {
                const double r = re[j];
                const double i = im[j];
                re[j] = r * rot_c[j] - i * rot_s[j];
                im[j] = r * rot_s[j] + i * rot_c[j];
                acc[0] += re[j];
            }
            const double value = (acc[0] + acc[1]) + (acc[2] + acc[3]);
            if (value > local.value) local = {k, value};
        }
        best[b] = local;
    });

    ScanPoint result = best[0];
    for (std::size_t b = 1; b < blocks; ++b) {
        if (best[b].value > result.value) result = best[b];
    }
    return result;
}

/// Scan of the window [1, 2 log^2(1/(sigma-1/2))] without the sigma <= 0.6
/// restriction of harper_sup_statistic.
inline HarperScanResult harper_scan(const SignAssignment& assignment, double sigma, double grid_step,
                                    std::uint64_t prime_limit, const PrimeList& primes,
                                    unsigned threads) {
    require_right_of_half(sigma, "harper_sup_statistic");
    require_prime_limit(prime_limit, "harper_sup_statistic");
    if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
        throw InvalidArgument("harper_sup_statistic: grid_step must be > 0");
    }
    const double upper = harper_window_upper(sigma);
    if (!(upper >= 1.0)) {
        throw InvalidArgument("harper_sup_statistic: empty window [1, " + format_double(upper) + "]");
    }
    auto last = static_cast<std::uint64_t>(std::floor((upper - 1.0) / grid_step));
    while (last > 0 && 1.0 + static_cast<double>(last) * grid_step > upper) --last;

    const auto ps = primes.up_to(prime_limit);
    std::vector<double> signs(ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j) signs[j] = sign_at_prime(assignment, ps[j]);

    const ScanPoint best = scan_cosine_max(ps, signs, sigma, 1.0, grid_step, last, threads);

    HarperScanResult r;
    r.sigma = sigma;
    r.t_star = 1.0 + static_cast<double>(best.index) * grid_step;
    r.sup_value = prime_cosine_sum(assignment, sigma, r.t_star, prime_limit, primes);
    r.centered_value = r.sup_value - harper_centering(sigma);
    r.grid_step = grid_step;
    r.prime_limit = prime_limit;
    r.window_upper = upper;
    r.grid_points = last + 1;
    return r;
}

}  // namespace detail

/// Grid maximum of the prime cosine sum over t in [1, 2 log^2(1/(sigma-1/2))],
/// 1/2 < sigma <= 0.6, grid t_k = 1 + k grid_step. See harper_default_grid_step.
inline HarperScanResult harper_sup_statistic(const SignAssignment& assignment, double sigma,
                                             double grid_step, std::uint64_t prime_limit,
                                             const PrimeList& primes, unsigned threads = 1) {
    if (!(sigma > 0.5 && sigma <= 0.6)) {
        throw InvalidArgument("harper_sup_statistic: sigma must lie in (1/2, 0.6], got " +
                              format_double(sigma));
    }
    return detail::harper_scan(assignment, sigma, grid_step, prime_limit, primes, threads);
}

inline std::string harper_results_to_csv(std::span<const HarperScanResult> rows) {
    CsvBuilder csv({"sigma", "t_star", "sup_value", "centered_value", "grid_step", "prime_limit"});
    for (const auto& r : rows) {
        csv.field(r.sigma)
            .field(r.t_star)
            .field(r.sup_value)
            .field(r.centered_value)
            .field(r.grid_step)
            .field(r.prime_limit)
            .end_row();
    }
    return csv.str();
}

}  // namespace rmf

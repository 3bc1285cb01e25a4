#pragma once

// Independent reference computations used only by the tests. None of these
// touch the smallest-prime-factor sieve or the library's evaluation paths.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

inline bool is_prime_trial_division(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

/// Classic boolean Eratosthenes sieve.
inline std::vector<std::uint32_t> eratosthenes(std::uint32_t n) {
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return primes;
}

/// mu(n) for all n <= N by the multiplicative sieve: start from 1, flip the
/// sign for every prime divisor, zero out multiples of p^2.
inline std::vector<int> mobius_table(std::uint32_t n) {
    std::vector<int> mu(static_cast<std::size_t>(n) + 1, 1);
    mu[0] = 0;
    for (const std::uint32_t p : eratosthenes(n)) {
        for (std::uint64_t j = p; j <= n; j += p) mu[j] = -mu[j];
        const std::uint64_t sq = static_cast<std::uint64_t>(p) * p;
        for (std::uint64_t j = sq; j <= n; j += sq) mu[j] = 0;
    }
    return mu;
}

/// lambda(n) = (-1)^Omega(n) by trial division.
inline int liouville(std::uint64_t n) {
    int omega = 0;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            n /= d;
            ++omega;
        }
    }
    if (n > 1) ++omega;
    return omega % 2 == 0 ? 1 : -1;
}

/// mu(n) by trial division.
inline int mobius(std::uint64_t n) {
    int sign = 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            sign = -sign;
        }
    }
    if (n > 1) sign = -sign;
    return sign;
}

/// Squarefree indicator for n <= N by crossing out multiples of every square.
inline std::vector<bool> squarefree_table(std::uint32_t n) {
    std::vector<bool> sf(static_cast<std::size_t>(n) + 1, true);
    sf[0] = false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        for (std::uint64_t j = d * d; j <= n; j += d * d) sf[j] = false;
    }
    return sf;
}

/// zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + s N^{-s-1}/12
///           - s(s+1)(s+2) N^{-s-3}/720
/// with a large N; independent of the library's eta-series scheme.
inline std::complex<double> zeta_direct(std::complex<double> s, std::uint64_t big_n = 1000000) {
    std::complex<double> sum = 0.0;
    for (std::uint64_t n = big_n - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    const double nd = static_cast<double>(big_n);
    const std::complex<double> np = std::pow(nd, -s);
    sum += np * nd / (s - 1.0) + 0.5 * np + s * np / nd / 12.0 -
           s * (s + 1.0) * (s + 2.0) * np / (nd * nd * nd) / 720.0;
    return sum;
}

/// int_1^N M(x) x^{-(s+1-alpha)} dx for a step function M (values[n-1] on
/// [n, n+1)), integrating each piece with adaptive Gauss-Kronrod quadrature.
inline std::complex<double> step_integral_quadrature(const std::vector<double>& values, double alpha,
                                                     std::complex<double> s) {
    using boost::math::quadrature::gauss_kronrod;
    const std::complex<double> expo = -(s + 1.0 - alpha);
    std::complex<double> total = 0.0;
    for (std::size_t n = 1; n < values.size(); ++n) {
        const double m = values[n - 1];
        if (m == 0.0) continue;
        const double a = static_cast<double>(n);
        const double b = a + 1.0;
        auto re = [&](double x) { return std::pow(x, expo).real(); };
        auto im = [&](double x) { return std::pow(x, expo).imag(); };
        const double ir = gauss_kronrod<double, 15>::integrate(re, a, b, 10, 1e-14);
        const double ii = gauss_kronrod<double, 15>::integrate(im, a, b, 10, 1e-14);
        total += m * std::complex<double>(ir, ii);
    }
    return total;
}

}  // namespace oracle

#pragma once

/// \file
/// Riemann zeta function on Re s > 0, s != 1.
///
/// Primary scheme: Borwein's accelerated alternating series for the Dirichlet
/// eta function,
///
///   zeta(s) = -1 / (d_n (1 - 2^{1-s})) sum_{k<n} (-1)^k (d_k - d_n) / (k+1)^s,
///   d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!),
///
/// whose truncation error is below 3 (1 + 2|t|) / ((3 + sqrt 8)^n |Gamma(s)| |1 - 2^{1-s}|).
/// The number of terms grows with |Im s| to absorb the 1/|Gamma(s)| ~ e^{pi|t|/2}
/// factor. Where 1 - 2^{1-s} is nearly zero (s = 1 + 2 pi i k / log 2, k != 0)
/// the eta quotient is ill-conditioned and Euler-Maclaurin summation is used
/// instead. Supported rectangle: 0 < Re s, |Im s| <= 300.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "rmf/errors.hpp"

namespace rmf {

namespace detail {

inline std::complex<double> zeta_borwein(std::complex<double> s, int n) {
    // d_k / d_n accumulated from the term ratio of the inner sum.
    std::vector<double> d(static_cast<std::size_t>(n) + 1);
    double term = 1.0 / n;
    double partial = term;
    d[0] = n * partial;
    for (int i = 0; i < n; ++i) {
        term *= 4.0 * (n + i) * (n - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
        partial += term;
        d[static_cast<std::size_t>(i) + 1] = n * partial;
    }
    const double dn = d[static_cast<std::size_t>(n)];
    std::complex<double> sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double coeff = (d[static_cast<std::size_t>(k)] - dn) / dn;
        const std::complex<double> power = std::exp(-s * std::log(static_cast<double>(k + 1)));
        sum += (k % 2 == 0 ? coeff : -coeff) * power;
    }
    const std::complex<double> eta_factor = 1.0 - std::exp((1.0 - s) * std::log(2.0));
    return -sum / eta_factor;
}

inline std::complex<double> zeta_euler_maclaurin(std::complex<double> s) {
    // B_{2k} / (2k)! for k = 1..12.
    static constexpr std::array<double, 12> kB = {
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
        43867.0 / 5109094217170944000.0,
        -174611.0 / 802857662698291200000.0,
        77683.0 / 14101100039391805440000.0,
        -236364091.0 / 1693824136731743669452800000.0,
    };
    const int big_n = 20 + static_cast<int>(std::ceil(std::abs(s.imag())));
    const double nd = big_n;
    std::complex<double> sum = 0.0;
    for (int m = 1; m < big_n; ++m) sum += std::exp(-s * std::log(static_cast<double>(m)));
    const std::complex<double> n_pow = std::exp(-s * std::log(nd));  // N^{-s}
    sum += n_pow * nd / (s - 1.0) + 0.5 * n_pow;
    // T_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) N^{-s-2k+1}
    std::complex<double> rising = s;
    std::complex<double> power = n_pow / nd;
    for (std::size_t k = 0; k < kB.size(); ++k) {
        sum += kB[k] * rising * power;
        const double j = 2.0 * static_cast<double>(k) + 1.0;
        rising *= (s + j) * (s + j + 1.0);
        power /= nd * nd;
    }
    return sum;
}

}  // namespace detail

inline std::complex<double> zeta(std::complex<double> s) {
    if (s.real() == 1.0 && s.imag() == 0.0) throw DomainError("zeta: pole at s = 1");
    if (!(s.real() > 0.0)) throw DomainError("zeta: requires Re s > 0");
    const double t = std::abs(s.imag());
    if (!(t <= 300.0)) throw DomainError("zeta: |Im s| > 300 is outside the supported range");
    const std::complex<double> eta_factor = 1.0 - std::exp((1.0 - s) * std::log(2.0));
    if (t > 1.0 && std::abs(eta_factor) < 0.1) return detail::zeta_euler_maclaurin(s);
    const int n = 40 + static_cast<int>(std::ceil(0.9 * t + 1.2 * std::log1p(t)));
    return detail::zeta_borwein(s, n);
}

inline double zeta(double s) { return zeta(std::complex<double>(s, 0.0)).real(); }

}  // namespace rmf

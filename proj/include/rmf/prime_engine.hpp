#pragma once

/// \file
/// Smallest-prime-factor sieve, prime enumeration, factorization and
/// squarefree detection.
///
/// Memory: the table stores one 32-bit entry per integer in [0, N], i.e.
/// 4(N+1) bytes. N = 10^8 needs about 400 MB. The hard upper bound on N is
/// 2^32 - 2 (entries are 32-bit); in practice the bound is available RAM.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "rmf/errors.hpp"

namespace rmf {

struct PrimePower {
    std::uint32_t prime;
    std::uint32_t exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Immutable smallest-prime-factor table on [2, N]. Safe for concurrent reads.
class SpfTable {
public:
    static constexpr std::uint64_t kMaxLimit = 0xFFFFFFFEULL;

    explicit SpfTable(std::uint64_t limit) {
        if (limit < 2) {
            throw InvalidArgument("build_spf_sieve: limit must be >= 2, got " +
                                  std::to_string(limit));
        }
        if (limit > kMaxLimit) {
            throw InvalidArgument("build_spf_sieve: limit exceeds 2^32-2: " +
                                  std::to_string(limit));
        }
        try {
            spf_.assign(limit + 1, 0);
        } catch (const std::bad_alloc&) {
            throw ResourceError("build_spf_sieve: cannot allocate " +
                                std::to_string(4 * (limit + 1)) + " bytes for limit " +
                                std::to_string(limit));
        }
        const std::uint64_t n = limit;
        for (std::uint64_t i = 2; i <= n; ++i) {
            if (spf_[i] != 0) continue;
            spf_[i] = static_cast<std::uint32_t>(i);
            for (std::uint64_t j = i * i; j <= n; j += i) {
                if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
            }
        }
    }

    std::uint32_t limit() const noexcept {
        return static_cast<std::uint32_t>(spf_.size() - 1);
    }

    /// Smallest prime factor of n, 2 <= n <= limit(). Unchecked.
    std::uint32_t spf(std::uint32_t n) const noexcept { return spf_[n]; }

    bool is_prime(std::uint64_t n) const noexcept {
        return n >= 2 && n <= limit() && spf_[n] == n;
    }

    bool covers(std::uint64_t n) const noexcept { return n >= 1 && n <= limit(); }

    void require_in_range(std::uint64_t n, const char* op) const {
        if (!covers(n)) {
            throw InvalidArgument(std::string(op) + ": n=" + std::to_string(n) +
                                  " outside [1, " + std::to_string(limit()) + "]");
        }
    }

    std::size_t memory_bytes() const noexcept { return spf_.size() * sizeof(std::uint32_t); }

private:
    std::vector<std::uint32_t> spf_;
};

inline SpfTable build_spf_sieve(std::uint64_t limit) { return SpfTable(limit); }

/// All primes p <= N, increasing.
inline std::vector<std::uint32_t> primes_up_to(const SpfTable& table) {
    std::vector<std::uint32_t> primes;
    const std::uint32_t n = table.limit();
    if (n >= 10) {
        const double x = n;
        primes.reserve(static_cast<std::size_t>(1.26 * x / std::log(x)) + 8);
    }
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (table.spf(i) == i) primes.push_back(i);
    }
    return primes;
}

/// Sorted primes of a sieve, with the sieve limit they are complete up to.
class PrimeList {
public:
    explicit PrimeList(const SpfTable& table) : primes_(primes_up_to(table)), limit_(table.limit()) {}

    std::uint32_t limit() const noexcept { return limit_; }
    std::span<const std::uint32_t> all() const noexcept { return primes_; }

    /// All primes p <= bound; bound must not exceed the sieve limit.
    std::span<const std::uint32_t> up_to(std::uint64_t bound) const {
        if (bound > limit_) {
            throw InvalidArgument("prime limit " + std::to_string(bound) +
                                  " exceeds sieve limit " + std::to_string(limit_));
        }
        const auto end = std::upper_bound(primes_.begin(), primes_.end(), bound);
        return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
    }

private:
    std::vector<std::uint32_t> primes_;
    std::uint32_t limit_;
};

/// Prime-power decomposition of n in increasing prime order; n = 1 gives {}.
inline std::vector<PrimePower> factorize(std::uint64_t n, const SpfTable& table) {
    table.require_in_range(n, "factorize");
    std::vector<PrimePower> out;
    auto m = static_cast<std::uint32_t>(n);
    while (m > 1) {
        const std::uint32_t p = table.spf(m);
        std::uint32_t a = 0;
        while (m % p == 0) {
            m /= p;
            ++a;
        }
        out.push_back({p, a});
    }
    return out;
}

/// mu^2(n).
inline bool is_squarefree(std::uint64_t n, const SpfTable& table) {
    table.require_in_range(n, "is_squarefree");
    auto m = static_cast<std::uint32_t>(n);
    while (m > 1) {
        const std::uint32_t p = table.spf(m);
        m /= p;
        if (m % p == 0) return false;
    }
    return true;
}

}  // namespace rmf

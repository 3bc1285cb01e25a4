#pragma once

/// \file
/// Sign assignments on primes and evaluation of the random multiplicative
/// functions
///
///   f(n)  = mu^2(n) * prod_{p | n} f(p)        (squarefree support)
///   f*(n) = prod_{p^a || n} f(p)^a             (completely multiplicative)
///
/// driven by a SignAssignment p -> {-1, +1}.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rmf/errors.hpp"
#include "rmf/mixing.hpp"
#include "rmf/prime_engine.hpp"

namespace rmf {

enum class Model { F, FStar };

inline const char* to_string(Model m) noexcept { return m == Model::F ? "f" : "fstar"; }

enum class SignMode { IidRademacher, AllMinusOne, Explicit };

inline const char* to_string(SignMode m) noexcept {
    switch (m) {
        case SignMode::IidRademacher: return "iid_rademacher";
        case SignMode::AllMinusOne: return "all_minus_one";
        case SignMode::Explicit: return "explicit";
    }
    return "?";
}

/// Reproducible rule prime -> {-1, +1}. Cheap to copy; explicit maps are shared.
class SignAssignment {
public:
    static SignAssignment iid(std::uint64_t seed) {
        return SignAssignment(SignMode::IidRademacher, seed, nullptr);
    }
    static SignAssignment all_minus_one() {
        return SignAssignment(SignMode::AllMinusOne, 0, nullptr);
    }
    static SignAssignment explicit_signs(std::map<std::uint64_t, int> signs) {
        for (const auto& [p, s] : signs) {
            if (s != 1 && s != -1) {
                throw InvalidArgument("explicit sign at p=" + std::to_string(p) +
                                      " must be +1 or -1, got " + std::to_string(s));
            }
        }
        return SignAssignment(SignMode::Explicit, 0,
                              std::make_shared<const std::map<std::uint64_t, int>>(
                                  std::move(signs)));
    }

    SignMode mode() const noexcept { return mode_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Deterministic sign at prime p. The caller guarantees p is prime.
    int sign_at(std::uint64_t p) const { return flip_ ? -raw_sign(p) : raw_sign(p); }

    /// Same rule with every sign multiplied by -1.
    SignAssignment flipped() const {
        SignAssignment copy = *this;
        copy.flip_ = !copy.flip_;
        return copy;
    }

    bool is_flipped() const noexcept { return flip_; }

private:
    SignAssignment(SignMode mode, std::uint64_t seed,
                   std::shared_ptr<const std::map<std::uint64_t, int>> explicit_signs)
        : mode_(mode), seed_(seed), explicit_(std::move(explicit_signs)), flip_(false) {}

    int raw_sign(std::uint64_t p) const {
        switch (mode_) {
            case SignMode::IidRademacher: return rademacher_sign(seed_, p);
            case SignMode::AllMinusOne: return -1;
            case SignMode::Explicit: {
                const auto it = explicit_->find(p);
                if (it == explicit_->end()) {
                    throw MissingSign("explicit assignment has no sign for prime " +
                                      std::to_string(p));
                }
                return it->second;
            }
        }
        return 0;
    }

    SignMode mode_;
    std::uint64_t seed_;
    std::shared_ptr<const std::map<std::uint64_t, int>> explicit_;
    bool flip_;
};

inline int sign_at_prime(const SignAssignment& a, std::uint64_t p) { return a.sign_at(p); }

/// Reads "p sign" pairs, one per line. Blank lines and lines starting with
/// '#' are skipped.
inline SignAssignment parse_explicit_signs(std::istream& in) {
    std::map<std::uint64_t, int> signs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        long long p = 0;
        long long s = 0;
        std::string extra;
        if (!(fields >> p >> s) || (fields >> extra) || p < 2) {
            throw InvalidArgument("explicit sign file: malformed line " +
                                  std::to_string(lineno) + ": '" + line + "'");
        }
        if (s != 1 && s != -1) {
            throw InvalidArgument("explicit sign file: sign must be +1 or -1 on line " +
                                  std::to_string(lineno));
        }
        signs[static_cast<std::uint64_t>(p)] = static_cast<int>(s);
    }
    return SignAssignment::explicit_signs(std::move(signs));
}

inline SignAssignment load_explicit_signs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sign file '" + path + "'");
    return parse_explicit_signs(in);
}

/// Signs of all primes <= N, materialized as a dense table indexed by n
/// (entries at composite n are 0). N bytes of memory. `limit` defaults to the
/// sieve limit and may be smaller.
class PrimeSignTable {
public:
    PrimeSignTable(const SignAssignment& assignment, const SpfTable& table,
                   std::uint32_t limit = 0) {
        if (limit == 0) limit = table.limit();
        if (limit > table.limit()) {
            throw InvalidArgument("PrimeSignTable: limit " + std::to_string(limit) +
                                  " exceeds sieve limit " + std::to_string(table.limit()));
        }
        signs_.assign(static_cast<std::size_t>(limit) + 1, 0);
        for (std::uint32_t n = 2; n <= limit; ++n) {
            if (table.spf(n) == n) signs_[n] = static_cast<std::int8_t>(sign_at_prime(assignment, n));
        }
    }

    int at(std::uint32_t p) const noexcept { return signs_[p]; }
    std::uint32_t limit() const noexcept { return static_cast<std::uint32_t>(signs_.size() - 1); }

private:
    std::vector<std::int8_t> signs_;
};

/// Fills out[n-1] = g(n) for n = 1..out.size() using the recurrences
///   f*(n) = f(p) f*(n/p),   f(n) = 0 if p | n/p else f(p) f(n/p),   p = spf(n).
/// O(1) per entry. Requires out.size() <= min(table.limit(), signs.limit()).
inline void fill_function_values(const SpfTable& table, const PrimeSignTable& signs, Model model,
                                 std::span<std::int8_t> out) {
    const auto n_max = static_cast<std::uint32_t>(out.size());
    if (n_max == 0) return;
    if (n_max > 1 && (n_max > table.limit() || n_max > signs.limit())) {
        throw InvalidArgument("fill_function_values: tables cover fewer than " +
                              std::to_string(n_max) + " values");
    }
    out[0] = 1;
    for (std::uint32_t n = 2; n <= n_max; ++n) {
        const std::uint32_t p = table.spf(n);
        const std::uint32_t m = n / p;
        const int prev = out[m - 1];
        if (model == Model::F && m % p == 0) {
            out[n - 1] = 0;
        } else {
            out[n - 1] = static_cast<std::int8_t>(signs.at(p) * prev);
        }
    }
}

/// Pointwise evaluation of f and f* under one assignment.
class MultiplicativeEvaluator {
public:
    enum class SignCache { None, Precomputed };

    MultiplicativeEvaluator(SignAssignment assignment, const SpfTable& table,
                            SignCache cache = SignCache::None)
        : assignment_(std::move(assignment)), table_(&table) {
        if (cache == SignCache::Precomputed) {
            cache_ = std::make_shared<const PrimeSignTable>(assignment_, table);
        }
    }

    const SignAssignment& assignment() const noexcept { return assignment_; }
    const SpfTable& table() const noexcept { return *table_; }

    int sign(std::uint32_t p) const {
        return cache_ ? cache_->at(p) : sign_at_prime(assignment_, p);
    }

    int evaluate_f(std::uint64_t n) const {
        table_->require_in_range(n, "evaluate_f");
        auto m = static_cast<std::uint32_t>(n);
        int value = 1;
        while (m > 1) {
            const std::uint32_t p = table_->spf(m);
            m /= p;
            if (m % p == 0) return 0;
            value *= sign(p);
        }
        return value;
    }

    int evaluate_f_star(std::uint64_t n) const {
        table_->require_in_range(n, "evaluate_f_star");
        auto m = static_cast<std::uint32_t>(n);
        int value = 1;
        while (m > 1) {
            const std::uint32_t p = table_->spf(m);
            m /= p;
            value *= sign(p);
        }
        return value;
    }

    /// sum_{d^2 | n} f(n / d^2), i.e. (f * 1_squares)(n).
    int evaluate_f_star_by_convolution(std::uint64_t n) const {
        table_->require_in_range(n, "evaluate_f_star_by_convolution");
        int total = 0;
        for (std::uint64_t d = 1; d * d <= n; ++d) {
            if (n % (d * d) == 0) total += evaluate_f(n / (d * d));
        }
        return total;
    }

    int evaluate(Model model, std::uint64_t n) const {
        return model == Model::F ? evaluate_f(n) : evaluate_f_star(n);
    }

private:
    SignAssignment assignment_;
    const SpfTable* table_;
    std::shared_ptr<const PrimeSignTable> cache_;
};

}  // namespace rmf

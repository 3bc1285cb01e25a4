#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rmf/sampler.hpp"

using namespace rmf;

namespace {

const SpfTable& table_1e5() {
    static const SpfTable t = build_spf_sieve(100000);
    return t;
}

}  // namespace

TEST(SignAtPrime, AllMinusOne) { EXPECT_EQ(sign_at_prime(SignAssignment::all_minus_one(), 2), -1); }

TEST(SignAtPrime, ExplicitLookup) {
    const auto a = SignAssignment::explicit_signs({{2, +1}});
    EXPECT_EQ(sign_at_prime(a, 2), 1);
    EXPECT_THROW(sign_at_prime(a, 3), MissingSign);
}

TEST(SignAtPrime, ExplicitRejectsNonUnitSigns) {
    EXPECT_THROW(SignAssignment::explicit_signs({{2, 0}}), InvalidArgument);
    EXPECT_THROW(SignAssignment::explicit_signs({{2, 2}}), InvalidArgument);
}

TEST(SignAtPrime, IidIsDeterministic) {
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 0xFFFFFFFFFFFFFFFFull}) {
        const auto a = SignAssignment::iid(seed);
        const auto b = SignAssignment::iid(seed);
        EXPECT_EQ(sign_at_prime(a, 3), sign_at_prime(a, 3));
        EXPECT_EQ(sign_at_prime(a, 3), sign_at_prime(b, 3));
    }
}

TEST(SignAtPrime, IidIsFairCoin) {
    // 10^4 seeds: the mean of +-1 has standard deviation 0.01.
    for (std::uint64_t p : {2ull, 3ull, 101ull, 999983ull}) {
        long sum = 0;
        for (std::uint64_t seed = 0; seed < 10000; ++seed) sum += sign_at_prime(SignAssignment::iid(seed), p);
        EXPECT_LT(std::abs(sum / 10000.0), 0.04) << p;
    }
}

TEST(SignAtPrime, IidAcrossPrimesIsBalanced) {
    const auto primes = primes_up_to(table_1e5());
    const auto a = SignAssignment::iid(7);
    long sum = 0;
    for (auto p : primes) sum += sign_at_prime(a, p);
    EXPECT_LT(std::abs(static_cast<double>(sum)) / std::sqrt(static_cast<double>(primes.size())), 4.0);
}

TEST(SignAtPrime, FlippedNegatesEverySign) {
    const auto a = SignAssignment::iid(99);
    const auto b = a.flipped();
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull}) EXPECT_EQ(a.sign_at(p), -b.sign_at(p));
    EXPECT_FALSE(b.flipped().is_flipped());
}

TEST(ExplicitFile, ParsesPairsAndComments) {
    std::istringstream in("# fixture\n2 1\n\n3 -1\n5 +1\n");
    const auto a = parse_explicit_signs(in);
    EXPECT_EQ(a.mode(), SignMode::Explicit);
    EXPECT_EQ(a.sign_at(2), 1);
    EXPECT_EQ(a.sign_at(3), -1);
    EXPECT_EQ(a.sign_at(5), 1);
    EXPECT_THROW(a.sign_at(7), MissingSign);
}

TEST(ExplicitFile, RejectsMalformedLines) {
    std::istringstream bad1("2\n");
    EXPECT_THROW(parse_explicit_signs(bad1), InvalidArgument);
    std::istringstream bad2("2 3\n");
    EXPECT_THROW(parse_explicit_signs(bad2), InvalidArgument);
    std::istringstream bad3("2 1 extra\n");
    EXPECT_THROW(parse_explicit_signs(bad3), InvalidArgument);
}

TEST(ExplicitFile, LoadsFromDiskAndReportsMissingFile) {
    const auto path = std::filesystem::temp_directory_path() / "rmf_signs_fixture.txt";
    {
        std::ofstream out(path);
        out << "2 -1\n3 -1\n";
    }
    const auto a = load_explicit_signs(path.string());
    EXPECT_EQ(a.sign_at(2), -1);
    std::filesystem::remove(path);
    EXPECT_THROW(load_explicit_signs(path.string()), IoError);
}

TEST(EvaluateF, Examples) {
    const MultiplicativeEvaluator e(SignAssignment::iid(5), table_1e5());
    EXPECT_EQ(e.evaluate_f(1), 1);
    EXPECT_EQ(e.evaluate_f(4), 0);
    const MultiplicativeEvaluator mu(SignAssignment::all_minus_one(), table_1e5());
    EXPECT_EQ(mu.evaluate_f(10), oracle::mobius(10));
    EXPECT_EQ(mu.evaluate_f(10), 1);
}

TEST(EvaluateF, OutOfRange) {
    const MultiplicativeEvaluator e(SignAssignment::iid(5), table_1e5());
    EXPECT_THROW(e.evaluate_f(0), InvalidArgument);
    EXPECT_THROW(e.evaluate_f(100001), InvalidArgument);
    EXPECT_THROW(e.evaluate_f_star(0), InvalidArgument);
    EXPECT_THROW(e.evaluate_f_star(100001), InvalidArgument);
    EXPECT_THROW(e.evaluate_f_star_by_convolution(100001), InvalidArgument);
}

TEST(EvaluateFStar, Examples) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MultiplicativeEvaluator e(SignAssignment::iid(seed), table_1e5());
        EXPECT_EQ(e.evaluate_f_star(4), 1);
        EXPECT_EQ(e.evaluate_f_star(1), 1);
    }
    const MultiplicativeEvaluator lam(SignAssignment::all_minus_one(), table_1e5());
    EXPECT_EQ(lam.evaluate_f_star(8), -1);
    int sum = 0;
    int oracle_sum = 0;
    for (int n = 1; n <= 10; ++n) {
        sum += lam.evaluate_f_star(n);
        oracle_sum += oracle::liouville(n);
    }
    EXPECT_EQ(sum, oracle_sum);
    EXPECT_EQ(sum, 0);
}

TEST(Convolution, Examples) {
    const MultiplicativeEvaluator e(SignAssignment::iid(17), table_1e5());
    EXPECT_EQ(e.evaluate_f_star_by_convolution(1), 1);
    EXPECT_EQ(e.evaluate_f_star_by_convolution(12), e.evaluate_f(3));
}

TEST(Convolution, MatchesCompleteMultiplicativeExtension) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const MultiplicativeEvaluator e(SignAssignment::iid(seed * 7919 + 1), table_1e5());
        for (std::uint32_t n = 1; n <= 10000; ++n) {
            ASSERT_EQ(e.evaluate_f_star_by_convolution(n), e.evaluate_f_star(n)) << seed << ' ' << n;
        }
    }
}

TEST(Multiplicativity, CoprimePairs) {
    const MultiplicativeEvaluator e(SignAssignment::iid(2024), table_1e5());
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint32_t> dist(1, 316);
    int checked = 0;
    while (checked < 10000) {
        const std::uint32_t m = dist(rng);
        const std::uint32_t n = dist(rng);
        if (std::gcd(m, n) != 1) continue;
        ASSERT_EQ(e.evaluate_f(m * n), e.evaluate_f(m) * e.evaluate_f(n)) << m << ' ' << n;
        ++checked;
    }
}

TEST(Multiplicativity, CompleteForAnyPair) {
    const MultiplicativeEvaluator e(SignAssignment::iid(2025), table_1e5());
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::uint32_t> dist(1, 316);
    for (int i = 0; i < 10000; ++i) {
        const std::uint32_t m = dist(rng);
        const std::uint32_t n = dist(rng);
        ASSERT_EQ(e.evaluate_f_star(m * n), e.evaluate_f_star(m) * e.evaluate_f_star(n)) << m << ' ' << n;
    }
}

TEST(Support, ZeroExactlyOffSquarefree) {
    const MultiplicativeEvaluator e(SignAssignment::iid(31337), table_1e5());
    const auto sf = oracle::squarefree_table(100000);
    for (std::uint32_t n = 1; n <= 100000; ++n) {
        ASSERT_EQ(e.evaluate_f(n) == 0, !sf[n]) << n;
        ASSERT_EQ(e.evaluate_f(n) == 0, !is_squarefree(n, table_1e5())) << n;
    }
}

TEST(AllMinusOne, RecoversMobiusAndLiouville) {
    const MultiplicativeEvaluator e(SignAssignment::all_minus_one(), table_1e5());
    const auto mu = oracle::mobius_table(100000);
    for (std::uint32_t n = 1; n <= 100000; ++n) {
        ASSERT_EQ(e.evaluate_f(n), mu[n]) << n;
        ASSERT_EQ(e.evaluate_f_star(n), oracle::liouville(n)) << n;
    }
}

TEST(SignCache, PrecomputedAgreesWithOnDemand) {
    const auto a = SignAssignment::iid(8);
    const MultiplicativeEvaluator lazy(a, table_1e5());
    const MultiplicativeEvaluator cached(a, table_1e5(), MultiplicativeEvaluator::SignCache::Precomputed);
    for (std::uint32_t n = 1; n <= 100000; n += 7) {
        ASSERT_EQ(lazy.evaluate_f(n), cached.evaluate_f(n));
        ASSERT_EQ(lazy.evaluate_f_star(n), cached.evaluate_f_star(n));
    }
}

TEST(FillFunctionValues, AgreesWithPointwiseEvaluation) {
    const auto a = SignAssignment::iid(77);
    const MultiplicativeEvaluator e(a, table_1e5());
    const PrimeSignTable signs(a, table_1e5());
    for (Model m : {Model::F, Model::FStar}) {
        std::vector<std::int8_t> g(100000);
        fill_function_values(table_1e5(), signs, m, g);
        for (std::uint32_t n = 1; n <= 100000; ++n) ASSERT_EQ(g[n - 1], e.evaluate(m, n)) << n;
    }
}

TEST(FillFunctionValues, RejectsUncoveredRange) {
    const PrimeSignTable signs(SignAssignment::iid(1), table_1e5(), 100);
    std::vector<std::int8_t> g(101);
    EXPECT_THROW(fill_function_values(table_1e5(), signs, Model::F, g), InvalidArgument);
}

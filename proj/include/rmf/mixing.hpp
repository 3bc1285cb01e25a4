#pragma once

/// \file
/// Counter-based mixing functions. Every random quantity in the library is a
/// pure function of a 64-bit key, so values never depend on evaluation order
/// or on how work is split across threads.

#include <cstdint>

namespace rmf {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Key for the coin flipped at prime p under a given seed:
///   splitmix64(splitmix64(seed) ^ (p * 0xD1B54A32D192ED03))
/// The sign is +1 when the top bit of the key is clear and -1 otherwise.
constexpr std::uint64_t prime_key(std::uint64_t seed, std::uint64_t p) noexcept {
    return splitmix64(splitmix64(seed) ^ (p * 0xD1B54A32D192ED03ULL));
}

constexpr int rademacher_sign(std::uint64_t seed, std::uint64_t p) noexcept {
    return (prime_key(seed, p) >> 63) != 0 ? -1 : 1;
}

/// Seed of trial `index` in an experiment with base seed `base`:
///   splitmix64(base ^ splitmix64(index + 0x632BE59BD9B4E019))
constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(base ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace rmf

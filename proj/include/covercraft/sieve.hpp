#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace covercraft::nt {

/// Default segment length in bytes (one byte per odd number).
inline constexpr std::uint64_t kDefaultSegment = 1u << 18;

/// Primes up to and including limit, via a plain sieve of Eratosthenes.
std::vector<std::uint32_t> small_primes(std::uint32_t limit);

/// Calls visit(p) for every prime p in [lo, hi], ascending, using a segmented
/// odd-only sieve. hi must stay below 2^64 - 2^33 so the bases fit.
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& visit,
                    std::uint64_t segment = kDefaultSegment);

/// pi(x) by segmented sieving.
std::uint64_t prime_count(std::uint64_t x, std::uint64_t segment = kDefaultSegment);

}  // namespace covercraft::nt

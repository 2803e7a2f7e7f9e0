#pragma once

// Exact integer number theory: primality, factoring, modular arithmetic,
// multiplicative orders and Chinese remaindering.
//
// Big values use GMP (mpz_class). Hot paths that fit in 64 bits go through
// the u64 helpers, which give bit-identical results.

#include <gmpxx.h>

#include "covercraft/errors.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covercraft::nt {

using BigInt = mpz_class;

BigInt from_decimal(const std::string& text);
std::string to_decimal(const BigInt& value);
bool fits_u64(const BigInt& value);
std::uint64_t to_u64(const BigInt& value);
BigInt from_u64(std::uint64_t value);
BigInt from_i64(std::int64_t value);

// ---------------------------------------------------------------------------
// 64-bit kernels

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime_u64(std::uint64_t n);

// ---------------------------------------------------------------------------
// Primality

struct Primality {
    bool prime = false;
    bool probabilistic = false;  // true when n >= 2^64 (error < 2^-128)
};

Primality primality(const BigInt& n);
bool is_prime(const BigInt& n);

// ---------------------------------------------------------------------------
// Factoring

struct PrimePower {
    BigInt prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    BigInt base;
    std::vector<PrimePower> factors;  // strictly increasing primes

    std::size_t distinct() const { return factors.size(); }
    unsigned total() const;
    BigInt product() const;
};

struct FactorOptions {
    /// Composite cofactors wider than this are not attacked.
    unsigned max_cofactor_bits = 96;
    /// Trial division bound (exclusive).
    std::uint32_t trial_limit = 1u << 16;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

/// Raised when a composite cofactor exceeds the bit budget. Carries what was
/// found before giving up.
class FactorBudgetExceeded : public BudgetExceeded {
public:
    FactorBudgetExceeded(const BigInt& n, const BigInt& cofactor, Factorization partial);

    const BigInt& number() const { return number_; }
    const BigInt& cofactor() const { return cofactor_; }
    const Factorization& partial() const { return partial_; }

private:
    BigInt number_;
    BigInt cofactor_;
    Factorization partial_;
};

/// Complete factorization of n >= 2.
/// Throws DomainError for n < 2, FactorBudgetExceeded on budget overrun.
Factorization factor(const BigInt& n, const FactorOptions& options = {});
Factorization factor_u64(std::uint64_t n);

// ---------------------------------------------------------------------------
// Modular arithmetic

BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

/// Least e >= 1 with a^e = 1 (mod q), q prime. Factors q - 1.
BigInt multiplicative_order(const BigInt& a, const BigInt& q,
                            const FactorOptions& options = {});

/// ord_d(a) for arbitrary d >= 1 with gcd(a, d) = 1 (via Carmichael's function).
std::uint64_t order_mod_u64(std::uint64_t a, std::uint64_t d);

/// True iff ord_q(a) == p, for prime p: checks a^p = 1 and a != 1 (mod q).
bool has_prime_order(const BigInt& a, const BigInt& p, const BigInt& q);

struct Congruence {
    BigInt residue;
    BigInt modulus;
};

struct CrtSolution {
    BigInt b;
    BigInt W;

    friend bool operator==(const CrtSolution&, const CrtSolution&) = default;
};

/// Combine pairwise coprime congruences. Empty input gives (0, 1).
/// Throws ConflictError naming the first non-coprime pair, DomainError on a
/// modulus < 2 or residue out of range.
CrtSolution crt_combine(std::span<const Congruence> congruences);

/// Solutions i >= 1 of j*a^i + l = 0 (mod d) are exactly {i : i = e (mod period)},
/// e being the least one.
struct ExponentCoset {
    std::uint64_t e = 0;
    std::uint64_t period = 0;

    friend bool operator==(const ExponentCoset&, const ExponentCoset&) = default;
};

/// Throws DomainError if d < 2 or gcd(a, d) > 1.
std::optional<ExponentCoset> form_exponent_order(std::uint64_t a, std::int64_t j,
                                                 std::int64_t l, std::uint64_t d);

/// Same as form_exponent_order for a prime modulus, by direct scan of one
/// period; used as the per-prime building block.
std::optional<ExponentCoset> form_exponent_order_prime(std::uint64_t a, std::int64_t j,
                                                       std::int64_t l, std::uint64_t p);

/// Intersection of two exponent cosets (generalized CRT on non-coprime periods).
std::optional<ExponentCoset> intersect_cosets(const ExponentCoset& x, const ExponentCoset& y);

// ---------------------------------------------------------------------------
// Prime enumeration

/// All primes in [lo, hi], ascending. Throws DomainError if lo > hi.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);
/// Big-range variant: sieves below 2^64, tests candidates individually above.
std::vector<BigInt> primes_in_range(const BigInt& lo, const BigInt& hi);

}  // namespace covercraft::nt

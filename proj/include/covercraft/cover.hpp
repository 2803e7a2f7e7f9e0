#pragma once

// Covering-congruence construction for the forms k*m + j*a^i + l.
//
// Pipeline: find_prime_pairs (per base a) -> select_distinct -> partition_pairs
// -> build_covering_system -> verify_covering_system.
//
// A pair (p, q) with ord_q(a) = p covers the exponent class i = I (mod p) of a
// triple (j, k, l): once m = b (mod q) with k*b + j*a^I + l = 0 (mod q), every
// k*m + j*a^i + l in that class is divisible by q.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covercraft/ntcore.hpp"

namespace covercraft::cover {

using nt::BigInt;

struct FormTriple {
    std::int64_t j = 1;
    std::int64_t k = 1;
    std::int64_t l = 0;

    friend auto operator<=>(const FormTriple&, const FormTriple&) = default;
};

std::string to_string(const FormTriple& t);

/// Closed interval for the per-class reciprocal sum of anchors.
struct Band {
    mpq_class low;
    mpq_class high;
};

/// Whether exponents run over 1 <= i <= ceil(K ln N) or stop one short.
enum class ExponentBound { Inclusive, Exclusive };

struct TargetConfig {
    int K = 2;
    std::vector<std::int64_t> L;  // the offset set L_N, |L| = K
    std::uint64_t M = 2;
    std::uint64_t a_min = 2;
    std::uint64_t a_max = 2;
    std::uint64_t p_max = 1000;
    unsigned factor_budget_bits = 96;
    std::optional<Band> band;  // unset: [M/(4K^3), M/(3K^3)]
    std::size_t min_pairs_per_class = 1;
    bool largest_q_per_anchor = true;
    double A = 1.0;  // echoes the Brun-sum constant; informational only
    ExponentBound exponent_bound = ExponentBound::Inclusive;

    /// Every violated cross-field constraint, one message each.
    std::vector<std::string> problems() const;
    /// Throws ConfigError listing problems() when non-empty.
    void validate() const;

    Band effective_band() const;
    /// R = {(j, k, l) : 1 <= |j|, k <= K, l in L}, ordered by (j, k, l).
    std::vector<FormTriple> triples() const;
    std::vector<std::uint64_t> bases() const;
};

/// Default offset set {p, 2p, ..., Kp} with p the least prime above K
/// (or the supplied prime, which must exceed K).
std::vector<std::int64_t> multiples_offsets(int K, std::optional<std::uint64_t> prime = std::nullopt);
/// Alternative offset set {K!+1, (K+1)!+1, ..., (2K-1)!+1}.
std::vector<std::int64_t> factorial_offsets(int K);

// ---------------------------------------------------------------------------
// Pair mining

struct PrimePair {
    std::uint64_t a = 2;
    std::uint64_t p = 0;  // anchor prime, = ord_q(a)
    BigInt q;             // covering prime

    friend bool operator==(const PrimePair&, const PrimePair&) = default;
};

/// Re-checks the PrimePair invariants from scratch. Returns the failed
/// checks (empty when the pair is valid).
std::vector<std::string> pair_problems(const PrimePair& pair, std::uint64_t M, int K);

/// True iff m*p + 1 is not prime for every 1 <= m <= M.
bool admissible_anchor(std::uint64_t p, std::uint64_t M);

struct AnchorRecord {
    std::uint64_t a = 0;
    std::uint64_t p = 0;
    bool budget_exceeded = false;
    nt::Factorization factorization;  // of a^p - 1 (partial when over budget)
    BigInt stuck_cofactor;            // set when over budget
    std::vector<std::string> transcript;
};

struct MiningResult {
    std::vector<PrimePair> pairs;       // sorted by (p, q)
    std::vector<AnchorRecord> anchors;  // one per prime p <= p_max

    std::size_t skipped() const;
};

struct MiningOptions {
    nt::FactorOptions factoring{};
    unsigned threads = 1;
};

/// Factors a^p - 1 for every prime p <= p_max and keeps each prime factor q
/// with ord_q(a) = p, q >= M*p and q > K^2. Throws DomainError if a < 2.
MiningResult find_prime_pairs(std::uint64_t a, std::uint64_t M, std::uint64_t p_max, int K,
                              const MiningOptions& options = {});

/// Drops pairs so every q occurs once overall. With largest_q_per_anchor only
/// the largest q of each (a, p) is kept. Earlier bases win q collisions.
std::vector<PrimePair> select_distinct(std::span<const PrimePair> pairs, bool largest_q_per_anchor);

// ---------------------------------------------------------------------------
// Partition

struct ClassKey {
    std::uint64_t a = 2;
    FormTriple triple;

    friend auto operator<=>(const ClassKey&, const ClassKey&) = default;
};

struct PairClass {
    ClassKey key;
    std::vector<PrimePair> pairs;  // ascending p
    mpq_class reciprocal_sum;      // sum of 1/p
    bool in_band = false;
};

struct Partition {
    Band band;
    std::vector<PairClass> classes;  // ordered by key

    bool all_in_band() const;
};

/// Greedy split of each base's pairs over the triples: pairs in order of
/// decreasing 1/p, each to the class still under min_pairs_per_class with the
/// smallest running sum, otherwise to the smallest running sum overall.
/// Throws InsufficientPairs (listing every shortfall) if some base has fewer
/// than |R| * min_pairs_per_class pairs, ConflictError on repeated q.
Partition partition_pairs(const std::map<std::uint64_t, std::vector<PrimePair>>& pairs_by_base,
                          std::span<const FormTriple> triples, const Band& band,
                          std::size_t min_pairs_per_class = 1);

// ---------------------------------------------------------------------------
// Covering system

/// 0 if j + l != 0 (mod q), else 1. Throws InvariantViolation if j*a + l = 0
/// (mod q) as well, which can only happen when q <= K(K-1).
int compute_I(std::uint64_t a, std::int64_t j, std::int64_t l, const BigInt& q);

struct CoverEntry {
    std::uint64_t a = 2;
    FormTriple triple;
    PrimePair pair;
    int I = 0;

    friend bool operator==(const CoverEntry&, const CoverEntry&) = default;
};

struct CoveringSystem {
    TargetConfig config;
    std::vector<CoverEntry> entries;
    BigInt W = 1;
    BigInt b = 0;
    /// Set when the entries do not reach every (a, triple) class.
    bool partial = false;
};

/// Local residue -k^-1 (j a^I + l) mod q for one entry.
BigInt local_residue(const CoverEntry& entry);

CoveringSystem build_covering_system(const Partition& partition, const TargetConfig& config);

struct VerificationFailure {
    std::string check;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationFailure> failures;
    std::size_t entries_checked = 0;
    std::size_t samples_checked = 0;

    bool ok() const { return failures.empty(); }
    std::string summary() const;
};

struct VerifyOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    std::uint64_t max_t = 64;  // m = b + t W, 0 <= t <= max_t
    std::uint64_t max_s = 16;  // i = I + s p, 0 <= s <= max_s
};

/// Re-derives every CoveringSystem invariant and samples covered (m, i).
/// Never throws on a bad system; failures are itemized.
VerificationReport verify_covering_system(const CoveringSystem& system, const VerifyOptions& options = {});

/// Stable 64-bit FNV-1a digest (hex) of the system's canonical text.
std::string system_digest(const CoveringSystem& system);

// ---------------------------------------------------------------------------
// Diagnostics

struct ResidueClass {
    std::uint64_t residue = 0;
    std::uint64_t modulus = 1;
};

struct CoverCheck {
    bool covers = false;
    std::optional<std::uint64_t> witness;  // least uncovered residue
    std::uint64_t lcm = 1;
};

/// Exhaustive full-cover test modulo the lcm of the moduli.
/// Throws BudgetExceeded when the lcm exceeds lcm_bound, DomainError on modulus 0.
CoverCheck verify_cover(std::span<const ResidueClass> classes, std::uint64_t lcm_bound = 1'000'000'000);

/// 1 - prod(1 - 1/p): the share of residues mod prod(p) hit by one class per
/// modulus. Throws DomainError on repeated moduli or a non-prime modulus.
mpq_class coverage_density(std::span<const std::uint64_t> moduli);

}  // namespace covercraft::cover

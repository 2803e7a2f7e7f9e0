#pragma once

// Numerical companions to the analytic side of the construction: the
// Mertens sandwich, explicit pi(x) bounds, Brun-type pair sums and the
// truncated 2^omega(d)/d sums grouped by the exponent e_{a,j,l}(d).
//
// Everything is exact enumeration over sieved primes; logarithms are natural.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "covercraft/sieve.hpp"

namespace covercraft::analytics {

/// A strict inequality counts as holding only when it clears this margin.
inline constexpr double kCheckMargin = 1e-9;

/// Largest truncation bound D accepted by the e-grouped sums.
inline constexpr std::uint64_t kMaxTruncation = 10'000'000;

struct MertensCheck {
    std::uint64_t x = 0;
    double sum = 0;      // sum of 1/p over p <= x
    double loglog = 0;   // ln ln x
    bool lower_ok = false;
    bool upper_ok = false;

    bool ok() const { return lower_ok && upper_ok; }
};

MertensCheck mertens_sum(std::uint64_t x, std::uint64_t segment = nt::kDefaultSegment);

struct PiBounds {
    std::uint64_t x = 0;
    std::uint64_t pi = 0;
    double lower = 0;
    double upper = 0;
    bool ok = false;
};

/// Requires x >= 59.
PiBounds pi_bounds_check(std::uint64_t x, std::uint64_t segment = nt::kDefaultSegment);

struct DecadeIncrement {
    std::uint64_t from = 0;  // exclusive
    std::uint64_t to = 0;    // inclusive
    double increment = 0;
};

struct BrunSum {
    std::uint64_t m = 2;
    std::uint64_t x = 0;
    double sum = 0;
    std::vector<std::uint64_t> primes_counted;  // only filled when x <= 10^4
    std::vector<DecadeIncrement> decades;
};

/// Sum of 1/p over primes p <= x with m*p + 1 prime. Requires m >= 2.
BrunSum brun_pair_sum(std::uint64_t m, std::uint64_t x, std::uint64_t segment = nt::kDefaultSegment);

/// A squarefree d <= D with all prime factors above K, coprime to a, for
/// which e_{a,j,l}(d) exists. d = 1 is included with e = 1.
struct OrderRecord {
    std::uint64_t d = 1;
    unsigned omega = 0;
    std::uint64_t e = 1;
};

struct OrderTable {
    int K = 2;
    std::uint64_t a = 2;
    std::int64_t j = 1;
    std::int64_t l = 1;
    std::uint64_t D = 2;
    std::vector<OrderRecord> records;  // ascending d
};

/// Throws BudgetExceeded when D > kMaxTruncation, DomainError when D < 2.
OrderTable qualifying_moduli(int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D);

struct TruncatedSum {
    double value = 0;
    std::optional<mpq_class> exact;
};

struct ESum {
    std::uint64_t x = 0;
    std::uint64_t D = 0;
    double value = 0;
    double ratio = 0;  // value / ln^2 x
    std::optional<mpq_class> exact;
};

/// E(x) truncated at D: sum of 2^omega(d)/d over qualifying d with e(d) <= x.
ESum E_truncated(std::uint64_t x, int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D,
                 bool exact = false);
ESum E_from_table(const OrderTable& table, std::uint64_t x, bool exact = false);

/// Sum of 2^omega(d) / (d e(d)) over qualifying d <= D.
TruncatedSum weighted_order_sum(int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D,
                                bool exact = false);
TruncatedSum weighted_from_table(const OrderTable& table, bool exact = false);

struct EParams {
    int K = 2;
    std::uint64_t a = 2;
    std::int64_t j = 1;
    std::int64_t l = 1;
    std::uint64_t D = 100'000;
};

struct DiagnosticsRequest {
    std::vector<std::uint64_t> grid;
    std::vector<std::uint64_t> brun_m = {2, 4};
    std::optional<EParams> e_params = EParams{};
    std::uint64_t segment = nt::kDefaultSegment;
    unsigned threads = 1;
};

struct DiagnosticsRow {
    std::uint64_t x = 0;
    MertensCheck mertens;
    std::uint64_t pi = 0;
    std::optional<PiBounds> pi_bounds;  // only for x >= 59
    std::vector<BrunSum> brun;
    std::optional<ESum> e_sum;
};

std::vector<DiagnosticsRow> run_diagnostics(const DiagnosticsRequest& request);

}  // namespace covercraft::analytics

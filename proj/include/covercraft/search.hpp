#pragma once

// Prime-window search: primes m = b (mod W) in [N, (1 + 1/K) N] whose forms
// |k*m + j*a^i + l| are all composite, plus an independent brute-force oracle.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covercraft/cover.hpp"

namespace covercraft::search {

using cover::BigInt;
using cover::CoveringSystem;
using cover::FormTriple;
using cover::TargetConfig;

struct SearchWindow {
    BigInt N;
    BigInt upper;
    std::uint64_t i_max = 1;
};

/// ceil(K ln N), or the largest integer strictly below K ln N for the
/// exclusive convention (never below 1).
std::uint64_t exponent_limit(const BigInt& N, int K, cover::ExponentBound bound);

/// upper defaults to floor((1 + 1/K) N). Throws DomainError when N < 2 or
/// upper <= N.
SearchWindow make_window(const BigInt& N, int K, cover::ExponentBound bound,
                         std::optional<BigInt> upper = std::nullopt);

enum class FormStatus {
    CompositeWitnessed,
    CompositeChecked,
    PrimeException,
    UnitOrZeroException,
    SkippedZeroOffset,
};

const char* to_string(FormStatus status);

struct FormOutcome {
    std::uint64_t a = 1;
    std::uint64_t i = 1;
    FormTriple triple;
    BigInt value;    // k*m + j*a^i + l (signed)
    FormStatus status = FormStatus::CompositeChecked;
    BigInt witness;  // covering prime for CompositeWitnessed / covered PrimeException, else 0

    bool is_exception() const {
        return status == FormStatus::PrimeException || status == FormStatus::UnitOrZeroException;
    }
};

/// Primes m in [N, upper] with m = b (mod W), ascending.
std::vector<BigInt> find_candidate_primes(const SearchWindow& window, const CoveringSystem& system);

/// Evaluates forms for one candidate against a fixed (config, window, system).
/// Powers a^i and the covering-entry lookup are built once.
class FormVerifier {
public:
    /// Throws ConfigError when some |l| > K*N.
    FormVerifier(const TargetConfig& config, const SearchWindow& window, const CoveringSystem& system);

    /// One outcome per (a, i, triple); a = 1 uses i = 1 only. Throws DomainError
    /// if m is off the residue class, VerificationError if a covered slot is
    /// not divisible by its q.
    std::vector<FormOutcome> verify(const BigInt& m) const;

private:
    struct Slot {
        std::uint64_t p;
        std::uint64_t residue;  // I mod p
        BigInt q;
    };

    TargetConfig config_;
    SearchWindow window_;
    BigInt W_;
    BigInt b_;
    std::vector<FormTriple> triples_;
    std::vector<std::uint64_t> bases_;                 // 1..K
    std::vector<std::vector<BigInt>> powers_;          // powers_[a-1][i]
    std::map<cover::ClassKey, std::vector<Slot>> slots_;
};

std::vector<FormOutcome> verify_forms(const BigInt& m, const TargetConfig& config, const SearchWindow& window,
                                      const CoveringSystem& system);

struct TallyKey {
    std::uint64_t a = 1;
    std::uint64_t i = 1;
    FormTriple triple;

    friend auto operator<=>(const TallyKey&, const TallyKey&) = default;
};

struct Tally {
    std::uint64_t prime = 0;
    std::uint64_t unit_or_zero = 0;
};

struct CandidateRecord {
    BigInt m;
    bool survivor = false;
    std::uint64_t witnessed = 0;
    std::uint64_t checked = 0;
    std::uint64_t skipped = 0;
    std::uint64_t prime_exceptions = 0;
    std::uint64_t unit_exceptions = 0;
    std::vector<FormOutcome> exceptions;
};

struct SearchReport {
    TargetConfig config;
    SearchWindow window;
    std::string system_digest;
    std::uint64_t Q_N = 0;
    std::uint64_t Q = 0;
    std::vector<CandidateRecord> candidates;  // ascending m
    std::vector<BigInt> survivors;
    std::map<TallyKey, Tally> tallies;
    double wall_seconds = 0.0;
};

struct RunOptions {
    unsigned threads = 1;
};

SearchReport run_experiment(const TargetConfig& config, const SearchWindow& window, const CoveringSystem& system,
                            const RunOptions& options = {});

/// Largest window the oracle accepts.
inline constexpr std::uint64_t kOracleWindowLimit = 1'000'000;

/// Every prime m in [N, upper] (no residue restriction) whose in-scope forms
/// with j*a^i + l != 0 all have composite absolute value. Uses only ntcore.
/// Throws GuardError when upper - N exceeds kOracleWindowLimit.
std::vector<BigInt> brute_oracle(const SearchWindow& window, const TargetConfig& config, unsigned threads = 1);

}  // namespace covercraft::search

// Brute-force survivor enumeration. Deliberately shares nothing with the
// covering path: no residue class, no power table, no witnesses.

#include "covercraft/parallel.hpp"
#include "covercraft/search.hpp"

namespace covercraft::search {

namespace {

bool all_forms_composite(const BigInt& m, const TargetConfig& config, std::uint64_t i_max) {
    BigInt power, offset, value;
    for (std::uint64_t a = 1; a <= static_cast<std::uint64_t>(config.K); ++a) {
        const std::uint64_t i_top = a == 1 ? 1 : i_max;
        for (std::uint64_t i = 1; i <= i_top; ++i) {
            mpz_ui_pow_ui(power.get_mpz_t(), a, i);
            for (std::int64_t j = -config.K; j <= config.K; ++j) {
                if (j == 0) continue;
                for (std::int64_t k = 1; k <= config.K; ++k) {
                    for (std::int64_t l : config.L) {
                        offset = nt::from_i64(j) * power + nt::from_i64(l);
                        if (offset == 0) continue;
                        value = abs(nt::from_i64(k) * m + offset);
                        if (value <= 1 || nt::is_prime(value)) return false;
                    }
                }
            }
        }
    }
    return true;
}

}  // namespace

std::vector<BigInt> brute_oracle(const SearchWindow& window, const TargetConfig& config, unsigned threads) {
    if (window.upper < window.N) throw DomainError("brute_oracle: upper < N");
    if (window.upper - window.N > nt::from_u64(kOracleWindowLimit))
        throw GuardError("brute_oracle: window wider than " + std::to_string(kOracleWindowLimit));
    const std::vector<BigInt> primes = nt::primes_in_range(window.N, window.upper);
    std::vector<char> keep(primes.size(), 0);
    parallel_for(primes.size(), threads,
                 [&](std::size_t idx) { keep[idx] = all_forms_composite(primes[idx], config, window.i_max); });
    std::vector<BigInt> out;
    for (std::size_t idx = 0; idx < primes.size(); ++idx)
        if (keep[idx]) out.push_back(primes[idx]);
    return out;
}

}  // namespace covercraft::search

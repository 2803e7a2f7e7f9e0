#include <algorithm>
#include <set>

#include "covercraft/cover.hpp"
#include "covercraft/parallel.hpp"

namespace covercraft::cover {

bool admissible_anchor(std::uint64_t p, std::uint64_t M) {
    for (std::uint64_t m = 1; m <= M; ++m) {
        const BigInt candidate = nt::from_u64(m) * p + 1;
        if (nt::is_prime(candidate)) return false;
    }
    return true;
}

std::vector<std::string> pair_problems(const PrimePair& pair, std::uint64_t M, int K) {
    std::vector<std::string> out;
    const BigInt p = nt::from_u64(pair.p);
    const BigInt kk = BigInt(K) * K;
    if (pair.a < 2) out.push_back("base a < 2");
    if (!nt::is_prime(p)) out.push_back("anchor p = " + std::to_string(pair.p) + " is not prime");
    if (!nt::is_prime(pair.q)) out.push_back("q = " + nt::to_decimal(pair.q) + " is not prime");
    if (!nt::has_prime_order(nt::from_u64(pair.a), p, pair.q))
        out.push_back("ord_q(a) != p for q = " + nt::to_decimal(pair.q));
    if (pair.q < nt::from_u64(M) * p)
        out.push_back("q = " + nt::to_decimal(pair.q) + " < M*p = " + nt::to_decimal(nt::from_u64(M) * p));
    if (pair.q <= kk) out.push_back("q = " + nt::to_decimal(pair.q) + " <= K^2");
    return out;
}

std::size_t MiningResult::skipped() const {
    return static_cast<std::size_t>(
        std::count_if(anchors.begin(), anchors.end(), [](const AnchorRecord& r) { return r.budget_exceeded; }));
}

namespace {

// Merge two factorizations of coprime-or-not parts into one of their product.
nt::Factorization merge(const nt::Factorization& x, const nt::Factorization& y) {
    std::map<BigInt, unsigned> exponents;
    for (const auto& f : x.factors) exponents[f.prime] += f.exponent;
    for (const auto& f : y.factors) exponents[f.prime] += f.exponent;
    nt::Factorization out;
    out.base = x.base * y.base;
    for (const auto& [prime, e] : exponents) out.factors.push_back({prime, e});
    return out;
}

nt::Factorization factor_or_unit(const BigInt& n, const nt::FactorOptions& options) {
    if (n < 2) return nt::Factorization{n, {}};
    return nt::factor(n, options);
}

AnchorRecord mine_anchor(std::uint64_t a, std::uint64_t p, std::uint64_t M, int K,
                         const nt::FactorOptions& options, std::vector<PrimePair>& out) {
    AnchorRecord record;
    record.a = a;
    record.p = p;
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), a, p);
    const BigInt minus_one = power - 1;
    const BigInt low = nt::from_u64(a - 1);
    // Primes of order p divide (a^p - 1)/(a - 1); a - 1 is factored separately.
    const BigInt cyclotomic = minus_one / low;
    nt::Factorization low_part = factor_or_unit(low, options);
    nt::Factorization high_part;
    try {
        high_part = factor_or_unit(cyclotomic, options);
    } catch (const nt::FactorBudgetExceeded& e) {
        record.budget_exceeded = true;
        record.stuck_cofactor = e.cofactor();
        record.factorization = merge(low_part, e.partial());
        record.factorization.base = minus_one;
        record.transcript.push_back("budget exceeded: composite cofactor with " +
                                    std::to_string(mpz_sizeinbase(e.cofactor().get_mpz_t(), 2)) +
                                    " bits left unfactored");
        return record;
    }
    record.factorization = merge(low_part, high_part);
    record.factorization.base = minus_one;
    if (record.factorization.product() != minus_one)
        throw InvariantViolation("mining: factorization of a^p - 1 does not multiply back");

    const BigInt bp = nt::from_u64(p);
    const BigInt threshold = nt::from_u64(M) * bp;
    const BigInt kk = BigInt(K) * K;
    const BigInt base = nt::from_u64(a);
    for (const auto& f : record.factorization.factors) {
        const BigInt& q = f.prime;
        const std::string tag = "q=" + nt::to_decimal(q) + ": ";
        if (!nt::has_prime_order(base, bp, q)) {
            record.transcript.push_back(tag + "a = 1 (mod q), order 1");
            continue;
        }
        if (q < threshold) {
            record.transcript.push_back(tag + "order p but q < M*p");
            continue;
        }
        if (q <= kk) {
            record.transcript.push_back(tag + "order p but q <= K^2");
            continue;
        }
        record.transcript.push_back(tag + "a^p = 1, a != 1 (mod q), order p; admitted");
        out.push_back({a, p, q});
    }
    return record;
}

}  // namespace

MiningResult find_prime_pairs(std::uint64_t a, std::uint64_t M, std::uint64_t p_max, int K,
                              const MiningOptions& options) {
    if (a < 2) throw DomainError("find_prime_pairs: base a must be >= 2");
    if (p_max < 2) throw DomainError("find_prime_pairs: p_max must be >= 2");
    const std::vector<std::uint64_t> anchors = nt::primes_in_range(2, p_max);

    std::vector<AnchorRecord> records(anchors.size());
    std::vector<std::vector<PrimePair>> found(anchors.size());
    parallel_for(anchors.size(), options.threads, [&](std::size_t idx) {
        records[idx] = mine_anchor(a, anchors[idx], M, K, options.factoring, found[idx]);
    });

    MiningResult result;
    result.anchors = std::move(records);
    for (auto& chunk : found)
        for (auto& pair : chunk) result.pairs.push_back(std::move(pair));
    std::sort(result.pairs.begin(), result.pairs.end(), [](const PrimePair& x, const PrimePair& y) {
        return x.p != y.p ? x.p < y.p : x.q < y.q;
    });
    return result;
}

std::vector<PrimePair> select_distinct(std::span<const PrimePair> pairs, bool largest_q_per_anchor) {
    std::vector<PrimePair> sorted(pairs.begin(), pairs.end());
    // Within each (a, p), larger q first so it survives both filters.
    std::sort(sorted.begin(), sorted.end(), [](const PrimePair& x, const PrimePair& y) {
        if (x.a != y.a) return x.a < y.a;
        if (x.p != y.p) return x.p < y.p;
        return x.q > y.q;
    });
    std::set<BigInt> used_q;
    std::set<std::pair<std::uint64_t, std::uint64_t>> used_anchor;
    std::vector<PrimePair> out;
    for (const auto& pair : sorted) {
        if (largest_q_per_anchor && used_anchor.contains({pair.a, pair.p})) continue;
        if (used_q.contains(pair.q)) continue;
        used_q.insert(pair.q);
        used_anchor.insert({pair.a, pair.p});
        out.push_back(pair);
    }
    std::sort(out.begin(), out.end(), [](const PrimePair& x, const PrimePair& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.p != y.p ? x.p < y.p : x.q < y.q;
    });
    return out;
}

}  // namespace covercraft::cover

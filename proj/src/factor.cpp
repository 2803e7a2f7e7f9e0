#include <algorithm>
#include <map>
#include <random>

#include "covercraft/ntcore.hpp"
#include "covercraft/sieve.hpp"

namespace covercraft::nt {

FactorBudgetExceeded::FactorBudgetExceeded(const BigInt& n, const BigInt& cofactor,
                                           Factorization partial)
    : BudgetExceeded("factor budget exceeded for " + to_decimal(n) + ": composite cofactor " +
                     to_decimal(cofactor) + " has " +
                     std::to_string(mpz_sizeinbase(cofactor.get_mpz_t(), 2)) + " bits"),
      number_(n),
      cofactor_(cofactor),
      partial_(std::move(partial)) {}

unsigned Factorization::total() const {
    unsigned sum = 0;
    for (const auto& f : factors) sum += f.exponent;
    return sum;
}

BigInt Factorization::product() const {
    BigInt out = 1;
    for (const auto& f : factors) {
        BigInt power;
        mpz_pow_ui(power.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
        out *= power;
    }
    return out;
}

namespace {

const std::vector<std::uint32_t>& trial_primes(std::uint32_t limit) {
    // Built once for the largest limit ever requested; callers filter by limit.
    static const std::vector<std::uint32_t> table = small_primes(1u << 20);
    if (limit > (1u << 20)) throw DomainError("trial_limit above 2^20 not supported");
    return table;
}

// Brent's variant of Pollard rho on 64-bit n (odd composite).
std::uint64_t rho_u64(std::uint64_t n, std::mt19937_64& rng) {
    if (n % 2 == 0) return 2;
    while (true) {
        const std::uint64_t c = rng() % (n - 1) + 1;
        std::uint64_t y = rng() % n;
        std::uint64_t g = 1, q = 1, x = 0, ys = 0;
        auto step = [&](std::uint64_t v) {
            return static_cast<std::uint64_t>((static_cast<unsigned __int128>(mul_mod_u64(v, v, n)) + c) % n);
        };
        const std::uint64_t batch = 128;
        for (std::uint64_t r = 1; g == 1; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = step(y);
            for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
                ys = y;
                const std::uint64_t steps = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < steps; ++i) {
                    y = step(y);
                    q = mul_mod_u64(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
            }
        }
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

BigInt rho_big(const BigInt& n, std::mt19937_64& rng) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    mpz_class x, y, ys, q, g, c, diff;
    while (true) {
        c = from_u64(rng());
        c %= n;
        if (c == 0) c = 1;
        y = from_u64(rng());
        y %= n;
        q = 1;
        g = 1;
        const std::uint64_t batch = 128;
        for (std::uint64_t r = 1; g == 1; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) {
                mpz_mul(y.get_mpz_t(), y.get_mpz_t(), y.get_mpz_t());
                mpz_add(y.get_mpz_t(), y.get_mpz_t(), c.get_mpz_t());
                mpz_mod(y.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());
            }
            for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
                ys = y;
                const std::uint64_t steps = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < steps; ++i) {
                    mpz_mul(y.get_mpz_t(), y.get_mpz_t(), y.get_mpz_t());
                    mpz_add(y.get_mpz_t(), y.get_mpz_t(), c.get_mpz_t());
                    mpz_mod(y.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());
                    mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                    mpz_mul(q.get_mpz_t(), q.get_mpz_t(), diff.get_mpz_t());
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g == n) {
            do {
                mpz_mul(ys.get_mpz_t(), ys.get_mpz_t(), ys.get_mpz_t());
                mpz_add(ys.get_mpz_t(), ys.get_mpz_t(), c.get_mpz_t());
                mpz_mod(ys.get_mpz_t(), ys.get_mpz_t(), n.get_mpz_t());
                diff = x - ys;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

class Factorer {
public:
    Factorer(const BigInt& n, const FactorOptions& options)
        : n_(n), options_(options), rng_(options.seed) {}

    Factorization run() {
        BigInt rest = n_;
        for (std::uint32_t p : trial_primes(options_.trial_limit)) {
            if (p >= options_.trial_limit) break;
            if (BigInt(p) * p > rest) break;
            if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
                unsigned e = 0;
                do {
                    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                    ++e;
                } while (mpz_divisible_ui_p(rest.get_mpz_t(), p));
                found_[BigInt(p)] += e;
            }
        }
        if (rest > 1) split(rest);
        return assemble();
    }

private:
    void split(const BigInt& m) {
        if (m == 1) return;
        if (is_prime(m)) {
            found_[m] += 1;
            return;
        }
        if (mpz_perfect_power_p(m.get_mpz_t())) {
            for (unsigned long k = mpz_sizeinbase(m.get_mpz_t(), 2); k >= 2; --k) {
                BigInt root;
                if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) {
                    for (unsigned long t = 0; t < k; ++t) split(root);
                    return;
                }
            }
        }
        if (mpz_sizeinbase(m.get_mpz_t(), 2) > options_.max_cofactor_bits)
            throw FactorBudgetExceeded(n_, m, assemble());
        BigInt d = fits_u64(m) ? from_u64(rho_u64(to_u64(m), rng_)) : rho_big(m, rng_);
        split(d);
        split(BigInt(m / d));
    }

    Factorization assemble() const {
        Factorization out;
        out.base = n_;
        for (const auto& [prime, exponent] : found_) out.factors.push_back({prime, exponent});
        return out;
    }

    BigInt n_;
    FactorOptions options_;
    std::mt19937_64 rng_;
    std::map<BigInt, unsigned> found_;
};

}  // namespace

Factorization factor(const BigInt& n, const FactorOptions& options) {
    if (n < 2) throw DomainError("factor: n must be >= 2, got " + to_decimal(n));
    Factorization out = Factorer(n, options).run();
    if (out.product() != n) throw InvariantViolation("factor: product check failed for " + to_decimal(n));
    return out;
}

namespace {

void split_u64(std::uint64_t n, std::mt19937_64& rng, std::map<std::uint64_t, unsigned>& found) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        found[n] += 1;
        return;
    }
    const std::uint64_t d = rho_u64(n, rng);
    split_u64(d, rng, found);
    split_u64(n / d, rng, found);
}

}  // namespace

Factorization factor_u64(std::uint64_t n) {
    if (n < 2) throw DomainError("factor: n must be >= 2, got " + std::to_string(n));
    std::map<std::uint64_t, unsigned> found;
    std::uint64_t rest = n;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
        while (rest % p == 0) {
            rest /= p;
            found[p] += 1;
        }
    }
    // Mod-30 wheel up to 2^12.
    static constexpr std::uint64_t wheel[8] = {1, 7, 11, 13, 17, 19, 23, 29};
    for (std::uint64_t base = 0; base < 4096 && base * base <= rest; base += 30) {
        for (std::uint64_t off : wheel) {
            const std::uint64_t p = base + off;
            if (p < 7) continue;
            while (rest % p == 0) {
                rest /= p;
                found[p] += 1;
            }
        }
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
    split_u64(rest, rng, found);
    Factorization out;
    out.base = from_u64(n);
    for (const auto& [prime, e] : found) out.factors.push_back({from_u64(prime), e});
    return out;
}

}  // namespace covercraft::nt

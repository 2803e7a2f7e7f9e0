#include <cmath>
#include <limits>
#include <unordered_map>
#include <numeric>

#include "covercraft/ntcore.hpp"
#include "covercraft/sieve.hpp"

namespace covercraft::nt {

BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
    if (modulus <= 0) throw DomainError("mod_pow: modulus must be >= 1");
    if (exponent < 0) throw DomainError("mod_pow: negative exponent");
    BigInt out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return out;
}

BigInt multiplicative_order(const BigInt& a, const BigInt& q, const FactorOptions& options) {
    if (!is_prime(q)) throw DomainError("multiplicative_order: modulus " + to_decimal(q) + " is not prime");
    BigInt r = a % q;
    if (r < 0) r += q;
    if (r == 0) throw DomainError("multiplicative_order: " + to_decimal(q) + " divides " + to_decimal(a));
    if (q == 2) return 1;
    BigInt order = q - 1;
    for (const auto& f : factor(order, options).factors) {
        for (unsigned e = 0; e < f.exponent; ++e) {
            BigInt candidate = order / f.prime;
            if (mod_pow(r, candidate, q) != 1) break;
            order = candidate;
        }
    }
    return order;
}

namespace {

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) { return a / gcd_u64(a, b) * b; }

}  // namespace

std::uint64_t order_mod_u64(std::uint64_t a, std::uint64_t d) {
    if (d == 0) throw DomainError("order_mod_u64: modulus 0");
    if (d == 1) return 1;
    a %= d;
    if (gcd_u64(a, d) != 1) throw DomainError("order_mod_u64: base not invertible");
    // Carmichael lambda(d), then strip prime factors while a^(lambda/p) = 1.
    const Factorization fd = factor_u64(d);
    std::uint64_t lambda = 1;
    for (const auto& f : fd.factors) {
        const std::uint64_t p = to_u64(f.prime);
        std::uint64_t pk1 = 1;  // p^(k-1)
        for (unsigned e = 1; e < f.exponent; ++e) pk1 *= p;
        std::uint64_t part = pk1 * (p - 1);
        if (p == 2 && f.exponent >= 3) part /= 2;
        lambda = lcm_u64(lambda, part);
    }
    if (lambda == 1) return 1;
    std::uint64_t order = lambda;
    for (const auto& f : factor_u64(lambda).factors) {
        const std::uint64_t p = to_u64(f.prime);
        while (order % p == 0 && pow_mod_u64(a, order / p, d) == 1) order /= p;
    }
    return order;
}

bool has_prime_order(const BigInt& a, const BigInt& p, const BigInt& q) {
    if (q < 2) return false;
    BigInt r = a % q;
    if (r < 0) r += q;
    return r != 1 && mod_pow(r, p, q) == 1 && is_prime(p);
}

CrtSolution crt_combine(std::span<const Congruence> congruences) {
    CrtSolution acc{0, 1};
    for (std::size_t t = 0; t < congruences.size(); ++t) {
        const auto& [residue, modulus] = congruences[t];
        if (modulus < 2) throw DomainError("crt_combine: modulus " + to_decimal(modulus) + " < 2");
        if (residue < 0 || residue >= modulus)
            throw DomainError("crt_combine: residue " + to_decimal(residue) + " not reduced mod " +
                              to_decimal(modulus));
        BigInt g = gcd(acc.W, modulus);
        if (g != 1) {
            for (std::size_t s = 0; s < t; ++s) {
                if (gcd(congruences[s].modulus, modulus) != 1)
                    throw ConflictError("crt_combine: moduli " + to_decimal(congruences[s].modulus) +
                                        " and " + to_decimal(modulus) + " are not coprime");
            }
        }
        // b' = b + W * ((r - b) * W^-1 mod m)
        BigInt inverse;
        mpz_invert(inverse.get_mpz_t(), acc.W.get_mpz_t(), modulus.get_mpz_t());
        BigInt step = (residue - acc.b) * inverse;
        mpz_mod(step.get_mpz_t(), step.get_mpz_t(), modulus.get_mpz_t());
        acc.b += acc.W * step;
        acc.W *= modulus;
    }
    return acc;
}

std::optional<ExponentCoset> intersect_cosets(const ExponentCoset& x, const ExponentCoset& y) {
    // i = x.e (mod x.period), i = y.e (mod y.period)
    const std::uint64_t g = gcd_u64(x.period, y.period);
    const std::uint64_t rx = x.e % x.period;
    const std::uint64_t ry = y.e % y.period;
    if ((rx % g) != (ry % g)) return std::nullopt;
    const unsigned __int128 period128 = static_cast<unsigned __int128>(x.period / g) * y.period;
    if (period128 > std::numeric_limits<std::uint64_t>::max())
        throw BudgetExceeded("intersect_cosets: combined period exceeds 64 bits");
    const std::uint64_t period = static_cast<std::uint64_t>(period128);
    // rx + x.period * t = ry (mod y.period)  =>  t = (ry - rx)/g * inv(x.period/g) mod (y.period/g)
    const std::uint64_t m = y.period / g;
    std::uint64_t t = 0;
    if (m > 1) {
        const std::uint64_t diff = ((ry + y.period - rx % y.period) % y.period) / g % m;
        mpz_class inv;
        mpz_class base = from_u64((x.period / g) % m);
        mpz_class mod = from_u64(m);
        mpz_invert(inv.get_mpz_t(), base.get_mpz_t(), mod.get_mpz_t());
        t = mul_mod_u64(diff, to_u64(inv), m);
    }
    const unsigned __int128 r = rx + static_cast<unsigned __int128>(x.period) * t;
    std::uint64_t residue = static_cast<std::uint64_t>(r % period);
    return ExponentCoset{residue == 0 ? period : residue, period};
}

namespace {

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m) {
    const std::int64_t r = static_cast<std::int64_t>(static_cast<__int128>(v) % static_cast<__int128>(m));
    return r < 0 ? static_cast<std::uint64_t>(r + static_cast<std::int64_t>(m)) : static_cast<std::uint64_t>(r);
}

constexpr std::uint64_t kMaxScan = std::uint64_t{1} << 32;

// Scan one full period of a mod q (q a prime power) and recover the solution coset.
std::optional<ExponentCoset> scan_prime_power(std::uint64_t a, std::int64_t j, std::int64_t l,
                                              std::uint64_t q) {
    const std::uint64_t order = order_mod_u64(a, q);
    if (order > kMaxScan)
        throw BudgetExceeded("form_exponent_order: order " + std::to_string(order) + " too large to scan");
    const std::uint64_t jr = reduce_signed(j, q);
    const std::uint64_t lr = reduce_signed(l, q);
    const std::uint64_t ar = a % q;
    std::uint64_t power = 1;
    std::uint64_t first = 0, second = 0, hits = 0;
    for (std::uint64_t i = 1; i <= order; ++i) {
        power = mul_mod_u64(power, ar, q);
        if ((static_cast<unsigned __int128>(mul_mod_u64(jr, power, q)) + lr) % q == 0) {
            if (hits == 0) first = i;
            else if (hits == 1) second = i;
            ++hits;
        }
    }
    if (hits == 0) return std::nullopt;
    const std::uint64_t period = hits == 1 ? order : second - first;
    if (order % period != 0 || hits != order / period)
        throw InvariantViolation("form_exponent_order: solution set is not a coset");
    return ExponentCoset{first, period};
}

}  // namespace

namespace {

// Least x in [0, order) with a^x = c (mod p), by baby-step giant-step.
std::optional<std::uint64_t> discrete_log(std::uint64_t a, std::uint64_t c, std::uint64_t order, std::uint64_t p) {
    auto step = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(order))));
    if (step == 0) step = 1;
    std::unordered_map<std::uint64_t, std::uint64_t> baby;
    baby.reserve(step * 2);
    std::uint64_t power = 1;
    for (std::uint64_t r = 0; r < step; ++r) {
        baby.emplace(power, r);
        power = mul_mod_u64(power, a, p);
    }
    const std::uint64_t giant = pow_mod_u64(a, (order - step % order) % order, p);  // a^-step
    std::uint64_t gamma = c;
    for (std::uint64_t t = 0; t <= step; ++t) {
        if (auto it = baby.find(gamma); it != baby.end()) {
            const std::uint64_t x = (t * step + it->second) % order;
            return x;
        }
        gamma = mul_mod_u64(gamma, giant, p);
    }
    return std::nullopt;
}

}  // namespace

std::optional<ExponentCoset> form_exponent_order_prime(std::uint64_t a, std::int64_t j,
                                                       std::int64_t l, std::uint64_t p) {
    if (p < 2) throw DomainError("form_exponent_order: modulus must be >= 2");
    if (a % p == 0) throw DomainError("form_exponent_order: gcd(a, d) > 1");
    const std::uint64_t jr = reduce_signed(j, p);
    const std::uint64_t lr = reduce_signed(l, p);
    if (jr == 0) {
        if (lr == 0) return ExponentCoset{1, 1};
        return std::nullopt;
    }
    const std::uint64_t order = order_mod_u64(a, p);
    if (order < 64) return scan_prime_power(a, j, l, p);
    // a^i = -l / j (mod p)
    const std::uint64_t target = mul_mod_u64((p - lr) % p, pow_mod_u64(jr, p - 2, p), p);
    if (target == 0 || pow_mod_u64(target, order, p) != 1) return std::nullopt;
    const auto x = discrete_log(a % p, target, order, p);
    if (!x) return std::nullopt;
    return ExponentCoset{*x == 0 ? order : *x, order};
}

std::optional<ExponentCoset> form_exponent_order(std::uint64_t a, std::int64_t j, std::int64_t l,
                                                 std::uint64_t d) {
    if (d < 2) throw DomainError("form_exponent_order: modulus must be >= 2");
    if (gcd_u64(a % d, d) != 1) throw DomainError("form_exponent_order: gcd(a, d) > 1");
    std::optional<ExponentCoset> acc = ExponentCoset{1, 1};
    for (const auto& f : factor_u64(d).factors) {
        std::uint64_t q = 1;
        for (unsigned e = 0; e < f.exponent; ++e) q *= to_u64(f.prime);
        const auto part = scan_prime_power(a, j, l, q);
        if (!part) return std::nullopt;
        acc = intersect_cosets(*acc, *part);
        if (!acc) return std::nullopt;
    }
    return acc;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw DomainError("primes_in_range: lo > hi");
    std::vector<std::uint64_t> out;
    for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
    return out;
}

std::vector<BigInt> primes_in_range(const BigInt& lo, const BigInt& hi) {
    if (lo > hi) throw DomainError("primes_in_range: lo > hi");
    std::vector<BigInt> out;
    BigInt start = lo < 0 ? BigInt(0) : lo;
    // Segment sieve while the range stays comfortably inside 64 bits.
    const BigInt sieve_cap = from_u64(std::uint64_t{1} << 62);
    if (start <= sieve_cap) {
        const BigInt sieve_hi = hi < sieve_cap ? hi : sieve_cap;
        for_each_prime(to_u64(start), to_u64(sieve_hi), [&](std::uint64_t p) { out.push_back(from_u64(p)); });
        start = sieve_hi + 1;
    }
    for (BigInt n = start; n <= hi; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

}  // namespace covercraft::nt

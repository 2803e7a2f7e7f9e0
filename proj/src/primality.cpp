#include <array>
#include <limits>

#include "covercraft/ntcore.hpp"

namespace covercraft::nt {

BigInt from_decimal(const std::string& text) {
    if (text.empty()) throw DomainError("empty decimal string");
    std::size_t start = text[0] == '-' ? 1 : 0;
    if (start == text.size()) throw DomainError("malformed decimal string: " + text);
    for (std::size_t i = start; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9') throw DomainError("malformed decimal string: " + text);
    return BigInt(text, 10);
}

std::string to_decimal(const BigInt& value) { return value.get_str(10); }

bool fits_u64(const BigInt& value) {
    return sgn(value) >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigInt& value) {
    if (!fits_u64(value)) throw DomainError("value does not fit in 64 bits: " + to_decimal(value));
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value.get_mpz_t());
    return out;
}

BigInt from_u64(std::uint64_t value) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(value), 0, 0, &value);
    return out;
}

BigInt from_i64(std::int64_t value) {
    if (value >= 0) return from_u64(static_cast<std::uint64_t>(value));
    // Negate through unsigned arithmetic so INT64_MIN is safe.
    BigInt out = from_u64(~static_cast<std::uint64_t>(value) + 1);
    return -out;
}

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod_u64(result, base, m);
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    static constexpr std::array<std::uint64_t, 12> small = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : small) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 37 * 37) return true;

    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Sinclair's base set: deterministic for all n < 2^64.
    static constexpr std::array<std::uint64_t, 7> bases = {2,      325,     9375,      28178,
                                                           450775, 9780504, 1795265022};
    for (std::uint64_t a : bases) {
        a %= n;
        if (a == 0) continue;
        std::uint64_t x = pow_mod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

Primality primality(const BigInt& n) {
    if (sgn(n) <= 0) return {false, false};
    if (fits_u64(n)) return {is_prime_u64(to_u64(n)), false};
    // BPSW followed by 40 Miller-Rabin rounds; GMP bounds the error by 4^-reps.
    const int verdict = mpz_probab_prime_p(n.get_mpz_t(), 64);
    return {verdict != 0, verdict == 1};
}

bool is_prime(const BigInt& n) { return primality(n).prime; }

}  // namespace covercraft::nt

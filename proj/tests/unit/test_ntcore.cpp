#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "covercraft/ntcore.hpp"
#include "covercraft/sieve.hpp"

using namespace covercraft;
using nt::BigInt;

namespace {

bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t naive_pow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    for (std::uint64_t i = 0; i < e; ++i) r = r * b % m;
    return r;
}

std::uint64_t naive_order(std::uint64_t a, std::uint64_t q) {
    std::uint64_t x = a % q;
    for (std::uint64_t e = 1;; ++e) {
        if (x == 1) return e;
        x = x * a % q;
    }
}

std::int64_t form_mod(std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t i, std::int64_t d) {
    std::int64_t power = 1;
    for (std::uint64_t t = 0; t < i; ++t) power = power * static_cast<std::int64_t>(a % d) % d;
    return (((j % d) * power + l) % d + d) % d;
}

}  // namespace

TEST_CASE("is_prime on the examples") {
    CHECK_FALSE(nt::is_prime(1));
    CHECK(nt::is_prime(31));
    CHECK_FALSE(nt::is_prime(2047));  // 23 * 89, strong pseudoprime to base 2
    CHECK_FALSE(nt::is_prime(0));
    CHECK_FALSE(nt::is_prime(-7));
    CHECK(nt::is_prime(2));
}

TEST_CASE("is_prime agrees with trial division below 10^6") {
    for (std::uint64_t n = 0; n < 1'000'000; ++n) REQUIRE(nt::is_prime_u64(n) == trial_prime(n));
}

TEST_CASE("is_prime rejects strong pseudoprimes and Carmichael numbers") {
    for (std::uint64_t n : {561ULL, 1105ULL, 3215031751ULL, 3825123056546413051ULL}) CHECK_FALSE(nt::is_prime_u64(n));
    CHECK_FALSE(nt::is_prime(nt::from_decimal("318665857834031151167461")));
    CHECK(nt::is_prime_u64(18446744073709551557ULL));  // largest 64-bit prime
    CHECK_FALSE(nt::is_prime_u64(18446744073709551615ULL));
}

TEST_CASE("primality flags probabilistic answers above 2^64") {
    const auto small = nt::primality(nt::from_u64(18446744073709551557ULL));
    CHECK(small.prime);
    CHECK_FALSE(small.probabilistic);
    const BigInt m127 = (BigInt(1) << 127) - 1;
    const auto big = nt::primality(m127);
    CHECK(big.prime);
    CHECK(big.probabilistic);
}

TEST_CASE("factor examples") {
    auto f12 = nt::factor(12);
    REQUIRE(f12.factors.size() == 2);
    CHECK(f12.factors[0] == nt::PrimePower{2, 2});
    CHECK(f12.factors[1] == nt::PrimePower{3, 1});

    auto f2047 = nt::factor(2047);
    REQUIRE(f2047.factors.size() == 2);
    CHECK(f2047.factors[0].prime == 23);
    CHECK(f2047.factors[1].prime == 89);

    auto f8191 = nt::factor(8191);
    REQUIRE(f8191.factors.size() == 1);
    CHECK(f8191.factors[0] == nt::PrimePower{8191, 1});

    CHECK_THROWS_AS(nt::factor(1), DomainError);
    CHECK_THROWS_AS(nt::factor(0), DomainError);
}

TEST_CASE("factor handles perfect powers and large semiprimes") {
    // 3^5 - 1 = 2 * 11^2
    auto f = nt::factor(242);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[1] == nt::PrimePower{11, 2});

    const BigInt p = nt::from_decimal("1000000007");
    const BigInt cube = p * p * p;
    auto fc = nt::factor(cube);
    REQUIRE(fc.factors.size() == 1);
    CHECK(fc.factors[0] == nt::PrimePower{p, 3});

    // 2^64 + 1 = 274177 * 67280421310721
    auto fermat = nt::factor((BigInt(1) << 64) + 1);
    REQUIRE(fermat.factors.size() == 2);
    CHECK(fermat.factors[0].prime == 274177);
    CHECK(fermat.factors[1].prime == nt::from_decimal("67280421310721"));

    // two ~40-bit primes: forces rho past trial division
    const BigInt a = nt::from_decimal("1099511627791");
    const BigInt b = nt::from_decimal("1099511628401");
    REQUIRE(nt::is_prime(a));
    REQUIRE(nt::is_prime(b));
    auto fab = nt::factor(a * b);
    REQUIRE(fab.factors.size() == 2);
    CHECK(fab.product() == a * b);
}

TEST_CASE("factor budget carries the partial factorization") {
    // 2^101 - 1 = 7432339208719 * 341117531003194129: a 101-bit composite
    const BigInt n = (BigInt(1) << 101) - 1;
    nt::FactorOptions tight;
    tight.max_cofactor_bits = 64;
    try {
        nt::factor(n * 3, tight);
        FAIL("expected FactorBudgetExceeded");
    } catch (const nt::FactorBudgetExceeded& e) {
        CHECK(e.cofactor() == n);
        REQUIRE(e.partial().factors.size() == 1);
        CHECK(e.partial().factors[0].prime == 3);
    }
    CHECK_THROWS_AS(nt::factor(n), BudgetExceeded);
    nt::FactorOptions wide;
    wide.max_cofactor_bits = 128;
    const auto full = nt::factor(n, wide);
    REQUIRE(full.factors.size() == 2);
    CHECK(full.factors[0].prime == nt::from_decimal("7432339208719"));
}

TEST_CASE("factor property: product and primality over random inputs") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 2000; ++iter) {
        const std::uint64_t n = (rng() >> (rng() % 62)) | 2;
        const auto f = nt::factor_u64(n);
        CHECK(f.product() == nt::from_u64(n));
        const auto g = nt::factor(nt::from_u64(n));
        REQUIRE(g.factors.size() == f.factors.size());
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            CHECK(f.factors[i] == g.factors[i]);
            CHECK(nt::is_prime(f.factors[i].prime));
            if (i > 0) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
        }
    }
}

TEST_CASE("mod_pow examples") {
    CHECK(nt::mod_pow(7, 0, 13) == 1);
    CHECK(nt::mod_pow(2, 5, 31) == 1);
    CHECK(nt::mod_pow(2, 10, 1000) == 24);
    CHECK_THROWS_AS(nt::mod_pow(2, 3, 0), DomainError);
}

TEST_CASE("mod_pow agrees with naive exponentiation") {
    std::size_t count = 0;
    for (std::uint64_t m = 1; m < 64; ++m)
        for (std::uint64_t b = 0; b < 48; ++b)
            for (std::uint64_t e = 0; e < 40; ++e, ++count) {
                REQUIRE(nt::mod_pow(nt::from_u64(b), nt::from_u64(e), nt::from_u64(m)) == naive_pow(b, e, m));
                REQUIRE(nt::pow_mod_u64(b, e, m) == naive_pow(b, e, m));
            }
    CHECK(count >= 100'000);
}

TEST_CASE("multiplicative order") {
    CHECK(nt::multiplicative_order(2, 31) == 5);
    CHECK(nt::multiplicative_order(2, 23) == 11);
    CHECK(nt::multiplicative_order(3, 11) == 5);
    CHECK_THROWS_AS(nt::multiplicative_order(31, 31), DomainError);
    for (std::uint64_t q : nt::primes_in_range(3, 2000))
        for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 10ULL}) {
            if (a % q == 0) continue;
            const auto ord = nt::multiplicative_order(nt::from_u64(a), nt::from_u64(q));
            REQUIRE(ord == naive_order(a, q));
            REQUIRE((q - 1) % ord.get_ui() == 0);
            REQUIRE(nt::order_mod_u64(a, q) == naive_order(a, q));
        }
}

TEST_CASE("order_mod_u64 on composite moduli") {
    for (std::uint64_t d = 2; d < 3000; ++d)
        for (std::uint64_t a : {2ULL, 3ULL, 7ULL}) {
            if (std::gcd(a, d) != 1) continue;
            REQUIRE(nt::order_mod_u64(a, d) == naive_order(a, d));
        }
}

TEST_CASE("has_prime_order") {
    CHECK(nt::has_prime_order(2, 5, 31));
    CHECK(nt::has_prime_order(2, 11, 89));
    CHECK_FALSE(nt::has_prime_order(2, 5, 11));
    CHECK_FALSE(nt::has_prime_order(1, 5, 31));
}

TEST_CASE("crt examples") {
    std::vector<nt::Congruence> one{{3, 7}};
    CHECK(nt::crt_combine(one) == nt::CrtSolution{3, 7});
    std::vector<nt::Congruence> two{{0, 3}, {1, 5}};
    CHECK(nt::crt_combine(two) == nt::CrtSolution{6, 15});
    std::vector<nt::Congruence> golden{{25, 31}, {85, 89}};
    CHECK(nt::crt_combine(golden) == nt::CrtSolution{1420, 2759});
    CHECK(nt::crt_combine({}) == nt::CrtSolution{0, 1});
    std::vector<nt::Congruence> clash{{1, 6}, {2, 9}};
    CHECK_THROWS_AS(nt::crt_combine(clash), ConflictError);
    std::vector<nt::Congruence> bad{{0, 1}};
    CHECK_THROWS_AS(nt::crt_combine(bad), DomainError);
}

TEST_CASE("crt property: solution satisfies every congruence") {
    std::mt19937_64 rng(11);
    const auto primes = nt::primes_in_range(2, 5000);
    for (int iter = 0; iter < 500; ++iter) {
        std::vector<std::uint64_t> chosen;
        const std::size_t k = 1 + rng() % 8;
        while (chosen.size() < k) {
            const std::uint64_t p = primes[rng() % primes.size()];
            if (std::find(chosen.begin(), chosen.end(), p) == chosen.end()) chosen.push_back(p);
        }
        std::vector<nt::Congruence> cs;
        BigInt W = 1;
        for (std::uint64_t p : chosen) {
            cs.push_back({nt::from_u64(rng() % p), nt::from_u64(p)});
            W *= p;
        }
        const auto s = nt::crt_combine(cs);
        CHECK(s.W == W);
        CHECK(s.b >= 0);
        CHECK(s.b < W);
        for (const auto& c : cs) CHECK(BigInt(s.b % c.modulus) == c.residue);
    }
}

TEST_CASE("form_exponent_order examples") {
    CHECK(nt::form_exponent_order(2, 1, -1, 31) == nt::ExponentCoset{5, 5});
    CHECK(nt::form_exponent_order(2, 1, 1, 5) == nt::ExponentCoset{2, 4});
    CHECK_FALSE(nt::form_exponent_order(2, 1, -3, 7).has_value());
    CHECK_THROWS_AS(nt::form_exponent_order(2, 1, 1, 6), DomainError);
    CHECK_THROWS_AS(nt::form_exponent_order(2, 1, 1, 1), DomainError);
}

TEST_CASE("form_exponent_order property: the solution set is a coset") {
    std::mt19937_64 rng(3);
    int checked = 0;
    for (std::uint64_t d = 3; d < 800; d += 2) {
        for (std::uint64_t a : {2ULL, 3ULL}) {
            if (std::gcd(a, d) != 1) continue;
            const std::int64_t j = static_cast<std::int64_t>(rng() % 5) - 2;
            const std::int64_t l = static_cast<std::int64_t>(rng() % 11) - 5;
            if (j == 0) continue;
            const auto coset = nt::form_exponent_order(a, j, l, d);
            const auto sd = static_cast<std::int64_t>(d);
            std::optional<std::uint64_t> least;
            for (std::uint64_t i = 1; i <= 2 * d + 2; ++i)
                if (form_mod(a, j, l, i, sd) == 0) {
                    least = i;
                    break;
                }
            REQUIRE(coset.has_value() == least.has_value());
            if (!coset) continue;
            CHECK(coset->e == *least);
            for (int s = 0; s < 50; ++s) {
                const std::uint64_t i = 1 + rng() % (4 * d);
                const bool in_coset = i % coset->period == coset->e % coset->period;
                REQUIRE((form_mod(a, j, l, i, sd) == 0) == in_coset);
            }
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("form_exponent_order with a large prime modulus uses the discrete log") {
    const std::uint64_t q = 1000003;  // ord_q(2) = q - 1
    const auto coset = nt::form_exponent_order_prime(2, 1, -static_cast<std::int64_t>(nt::pow_mod_u64(2, 777, q)), q);
    REQUIRE(coset.has_value());
    CHECK(coset->period == q - 1);
    CHECK(coset->e == 777);
}

TEST_CASE("intersect_cosets") {
    CHECK(nt::intersect_cosets({1, 4}, {3, 6}) == nt::ExponentCoset{9, 12});
    CHECK_FALSE(nt::intersect_cosets({1, 4}, {2, 6}).has_value());
    CHECK(nt::intersect_cosets({2, 5}, {2, 5}) == nt::ExponentCoset{2, 5});
}

TEST_CASE("primes_in_range") {
    CHECK(nt::primes_in_range(14, 16).empty());
    CHECK(nt::primes_in_range(1, 100).size() == 25);
    CHECK(nt::primes_in_range(2, 10) == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK_THROWS_AS(nt::primes_in_range(10, 2), DomainError);
    const BigInt lo = (BigInt(1) << 64) - 100;
    const BigInt hi = (BigInt(1) << 64) + 100;
    const auto big = nt::primes_in_range(lo, hi);
    const std::vector<std::string> expected{"18446744073709551521", "18446744073709551533", "18446744073709551557",
                                            "18446744073709551629", "18446744073709551653", "18446744073709551667",
                                            "18446744073709551697", "18446744073709551709"};
    REQUIRE(big.size() == expected.size());
    for (std::size_t i = 0; i < big.size(); ++i) CHECK(nt::to_decimal(big[i]) == expected[i]);
}

TEST_CASE("segmented sieve is invariant under segment size") {
    const std::uint64_t lo = 999'000, hi = 1'200'000;
    std::vector<std::uint64_t> reference;
    nt::for_each_prime(lo, hi, [&](std::uint64_t p) { reference.push_back(p); });
    for (std::uint64_t segment : {64ULL, 1000ULL, 4096ULL, 1ULL << 20}) {
        std::vector<std::uint64_t> got;
        nt::for_each_prime(lo, hi, [&](std::uint64_t p) { got.push_back(p); }, segment);
        CHECK(got == reference);
    }
    for (std::uint64_t p : reference) CHECK(trial_prime(p));
    CHECK(nt::prime_count(1'000'000) == 78498);
    CHECK(nt::prime_count(1'000'000, 77) == 78498);
    CHECK(nt::prime_count(1) == 0);
    CHECK(nt::prime_count(2) == 1);
}

TEST_CASE("decimal conversions") {
    CHECK(nt::to_decimal(nt::from_decimal("-123456789012345678901234567890")) == "-123456789012345678901234567890");
    CHECK_THROWS_AS(nt::from_decimal("12a"), DomainError);
    CHECK_THROWS_AS(nt::from_decimal(""), DomainError);
    CHECK(nt::fits_u64(nt::from_u64(~0ULL)));
    CHECK_FALSE(nt::fits_u64(BigInt(1) << 64));
    CHECK_FALSE(nt::fits_u64(-1));
}

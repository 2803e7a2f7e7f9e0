#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "covercraft/analytics.hpp"
#include "covercraft/errors.hpp"
#include "covercraft/ntcore.hpp"

using namespace covercraft;
using namespace covercraft::analytics;

namespace {

// Reference values computed with sympy (exact rationals, then rounded).
constexpr double kTol = 1e-12;

bool squarefree_above(std::uint64_t d, int K, std::uint64_t a, unsigned& omega) {
    omega = 0;
    std::uint64_t rest = d;
    for (std::uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        rest /= p;
        if (rest % p == 0 || p <= static_cast<std::uint64_t>(K) || a % p == 0) return false;
        ++omega;
    }
    if (rest > 1) {
        if (rest <= static_cast<std::uint64_t>(K) || a % rest == 0) return false;
        ++omega;
    }
    return true;
}

// Least i >= 1 with j*a^i + l = 0 (mod d), scanning i = 1..d.
std::optional<std::uint64_t> naive_e(std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t d) {
    if (d == 1) return 1;
    const auto sd = static_cast<std::int64_t>(d);
    std::uint64_t power = 1;
    for (std::uint64_t i = 1; i <= d; ++i) {
        power = power * (a % d) % d;
        const std::int64_t value = ((j % sd) * static_cast<std::int64_t>(power) + l % sd) % sd;
        if (value == 0) return i;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("mertens_sum reference values") {
    auto c = mertens_sum(2);
    CHECK(c.sum == doctest::Approx(0.5).epsilon(kTol));
    CHECK(c.ok());

    c = mertens_sum(10);
    CHECK(c.sum == doctest::Approx(1.176190476190476).epsilon(kTol));
    CHECK(c.loglog == doctest::Approx(0.834032445247956).epsilon(kTol));
    CHECK(c.ok());

    c = mertens_sum(100'000);
    CHECK(c.sum == doctest::Approx(2.705272179047264).epsilon(kTol));
    CHECK(c.loglog == doctest::Approx(2.443470357682056).epsilon(kTol));
    CHECK(c.ok());

    CHECK_THROWS_AS(mertens_sum(1), DomainError);
}

TEST_CASE("mertens sandwich holds across the grid") {
    for (std::uint64_t x : {2ull, 3ull, 10ull, 1000ull, 100'000ull, 10'000'000ull}) {
        const auto c = mertens_sum(x);
        CAPTURE(x);
        CHECK(c.lower_ok);
        CHECK(c.upper_ok);
        CHECK(c.sum - c.loglog > kCheckMargin);
        CHECK(c.loglog + 1.0 - c.sum > kCheckMargin);
    }
}

TEST_CASE("pi bounds reference values") {
    auto b = pi_bounds_check(59);
    CHECK(b.pi == 17);
    CHECK(b.lower == doctest::Approx(16.24381375636031).epsilon(kTol));
    CHECK(b.upper == doctest::Approx(19.79240597552095).epsilon(kTol));
    CHECK(b.ok);

    b = pi_bounds_check(100);
    CHECK(b.pi == 25);
    CHECK(b.lower == doctest::Approx(24.072370307807766).epsilon(kTol));
    CHECK(b.upper == doctest::Approx(28.78766273309811).epsilon(kTol));
    CHECK(b.ok);

    b = pi_bounds_check(1'000'000);
    CHECK(b.pi == 78498);
    CHECK(b.ok);

    CHECK(pi_bounds_check(1000).ok);
    CHECK_THROWS_AS(pi_bounds_check(58), DomainError);
}

TEST_CASE("pi bounds hold at every x in [59, 5000]") {
    for (std::uint64_t x = 59; x <= 5000; ++x) {
        const auto b = pi_bounds_check(x);
        if (!b.ok) FAIL("bounds fail at x = " << x);
    }
}

TEST_CASE("brun_pair_sum reference values") {
    auto s = brun_pair_sum(2, 100);
    CHECK(s.sum == doctest::Approx(1.2687457599906842).epsilon(kTol));
    CHECK(s.primes_counted == std::vector<std::uint64_t>{2, 3, 5, 11, 23, 29, 41, 53, 83, 89});

    s = brun_pair_sum(4, 50);
    CHECK(s.sum == doctest::Approx(0.6033963940940685).epsilon(kTol));
    CHECK(s.primes_counted == std::vector<std::uint64_t>{3, 7, 13, 37, 43});

    CHECK_THROWS_AS(brun_pair_sum(1, 100), DomainError);
}

TEST_CASE("brun sums are monotone and decades add up") {
    double previous = 0;
    for (std::uint64_t x : {10ull, 100ull, 1000ull, 10'000ull, 100'000ull}) {
        const auto s = brun_pair_sum(2, x);
        CHECK(s.sum >= previous);
        previous = s.sum;
        double total = 0;
        for (const auto& d : s.decades) total += d.increment;
        CHECK(total == doctest::Approx(s.sum).epsilon(1e-12));
    }
}

TEST_CASE("segment size does not change results") {
    for (std::uint64_t segment : {64ull, 1000ull, 1ull << 16}) {
        CHECK(mertens_sum(200'000, segment).sum == doctest::Approx(mertens_sum(200'000).sum).epsilon(1e-14));
        CHECK(pi_bounds_check(200'000, segment).pi == pi_bounds_check(200'000).pi);
        CHECK(brun_pair_sum(4, 200'000, segment).sum == doctest::Approx(brun_pair_sum(4, 200'000).sum).epsilon(1e-14));
    }
}

TEST_CASE("E_truncated reference value") {
    const auto s = E_truncated(4, 2, 2, 1, 1, 100, true);
    REQUIRE(s.exact);
    CHECK(*s.exact == mpq_class(557, 255));
    CHECK(s.value == doctest::Approx(557.0 / 255.0).epsilon(kTol));

    const auto w = weighted_order_sum(2, 2, 1, 1, 100);
    CHECK(w.value == doctest::Approx(2.037591357069378).epsilon(kTol));
}

TEST_CASE("qualifying_moduli matches a naive scan") {
    constexpr std::uint64_t D = 3000;
    for (auto [a, j, l] : {std::tuple<std::uint64_t, std::int64_t, std::int64_t>{2, 1, 1}, {2, -1, 1}, {3, 2, -5}}) {
        const int K = 3;
        const auto table = qualifying_moduli(K, a, j, l, D);
        std::map<std::uint64_t, OrderRecord> got;
        for (const auto& r : table.records) got[r.d] = r;
        std::size_t expected = 0;
        for (std::uint64_t d = 1; d <= D; ++d) {
            unsigned omega = 0;
            if (!squarefree_above(d, K, a, omega)) continue;
            const auto e = naive_e(a, j, l, d);
            if (!e) {
                CHECK_MESSAGE(got.count(d) == 0, "d = " << d);
                continue;
            }
            ++expected;
            REQUIRE_MESSAGE(got.count(d) == 1, "d = " << d);
            CHECK(got[d].omega == omega);
            CHECK_MESSAGE(got[d].e == *e, "d = " << d);
        }
        CHECK(table.records.size() == expected);
    }
}

TEST_CASE("grouping identity is exact at D = 10^4") {
    constexpr std::uint64_t D = 10'000;
    const int K = 2;
    const std::uint64_t a = 2;

    // Independent side: naive e(d) and exact rationals.
    mpq_class direct = 0;
    std::map<std::uint64_t, mpq_class> by_e;
    for (std::uint64_t d = 1; d <= D; ++d) {
        unsigned omega = 0;
        if (!squarefree_above(d, K, a, omega)) continue;
        const auto e = naive_e(a, 1, 1, d);
        if (!e) continue;
        const mpq_class w(mpz_class(1) << omega, nt::from_u64(d));
        direct += w / nt::from_u64(*e);
        by_e[*e] += w;
    }
    direct.canonicalize();

    const auto weighted = weighted_order_sum(K, a, 1, 1, D, true);
    REQUIRE(weighted.exact);
    CHECK(*weighted.exact == direct);

    // Regrouped: sum over x of (E(x) - E(x-1)) / x.
    const auto table = qualifying_moduli(K, a, 1, 1, D);
    std::uint64_t max_e = 0;
    for (const auto& r : table.records) max_e = std::max(max_e, r.e);
    mpq_class regrouped = 0;
    mpq_class previous = 0;
    for (const auto& [e, w] : by_e) {
        const auto E = E_from_table(table, e, true);
        regrouped += (*E.exact - previous) / nt::from_u64(e);
        previous = *E.exact;
        mpq_class expected = w;
        expected.canonicalize();
        mpq_class step = *E.exact - *E_from_table(table, e - 1, true).exact;
        step.canonicalize();
        CHECK(step == expected);
    }
    regrouped.canonicalize();
    CHECK(regrouped == direct);
    CHECK(*E_from_table(table, max_e, true).exact == previous);
    CHECK(weighted.value == doctest::Approx(direct.get_d()).epsilon(1e-12));
}

TEST_CASE("truncation bounds") {
    CHECK_THROWS_AS(qualifying_moduli(2, 2, 1, 1, 1), DomainError);
    CHECK_THROWS_AS(qualifying_moduli(2, 2, 1, 1, kMaxTruncation + 1), BudgetExceeded);
}

TEST_CASE("run_diagnostics rows") {
    DiagnosticsRequest request;
    request.grid = {2, 10, 100, 1000};
    request.e_params = EParams{2, 2, 1, 1, 1000};
    request.threads = 2;
    const auto rows = run_diagnostics(request);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].pi == 1);
    CHECK(!rows[1].pi_bounds);
    CHECK(rows[2].pi_bounds);
    CHECK(rows[2].pi == 25);
    CHECK(rows[3].brun.size() == 2);
    REQUIRE(rows[3].e_sum);
    CHECK(rows[3].e_sum->value == doctest::Approx(E_truncated(1000, 2, 2, 1, 1, 1000).value));
    for (const auto& row : rows) CHECK(row.mertens.ok());
}

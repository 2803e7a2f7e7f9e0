#include "covercraft/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "covercraft/ntcore.hpp"
#include "covercraft/parallel.hpp"

namespace covercraft::analytics {

namespace {

// Kahan-compensated accumulator.
class Accumulator {
public:
    void add(double term) {
        const double y = term - carry_;
        const double t = total_ + y;
        carry_ = (t - total_) - y;
        total_ = t;
    }
    double value() const { return total_; }

private:
    double total_ = 0;
    double carry_ = 0;
};

}  // namespace

MertensCheck mertens_sum(std::uint64_t x, std::uint64_t segment) {
    if (x < 2) throw DomainError("mertens_sum: x must be >= 2");
    Accumulator acc;
    nt::for_each_prime(2, x, [&](std::uint64_t p) { acc.add(1.0 / static_cast<double>(p)); }, segment);
    MertensCheck out;
    out.x = x;
    out.sum = acc.value();
    out.loglog = std::log(std::log(static_cast<double>(x)));
    out.lower_ok = out.sum - out.loglog > kCheckMargin;
    out.upper_ok = out.loglog + 1.0 - out.sum > kCheckMargin;
    return out;
}

PiBounds pi_bounds_check(std::uint64_t x, std::uint64_t segment) {
    if (x < 59) throw DomainError("pi_bounds_check: bounds require x >= 59");
    PiBounds out;
    out.x = x;
    out.pi = nt::prime_count(x, segment);
    const double lx = std::log(static_cast<double>(x));
    const double lead = static_cast<double>(x) / lx;
    out.lower = lead * (1.0 + 1.0 / (2.0 * lx));
    out.upper = lead * (1.0 + 3.0 / (2.0 * lx));
    const double pi = static_cast<double>(out.pi);
    out.ok = pi - out.lower > kCheckMargin && out.upper - pi > kCheckMargin;
    return out;
}

BrunSum brun_pair_sum(std::uint64_t m, std::uint64_t x, std::uint64_t segment) {
    if (m < 2) throw DomainError("brun_pair_sum: m must be >= 2");
    BrunSum out;
    out.m = m;
    out.x = x;
    if (x < 2) return out;
    Accumulator total;
    Accumulator decade;
    std::uint64_t decade_from = 1, decade_to = 10;
    auto close_decade = [&] {
        out.decades.push_back({decade_from, std::min(decade_to, x), decade.value()});
        decade = Accumulator{};
        decade_from = decade_to;
        decade_to = decade_to > x / 10 ? x : decade_to * 10;
    };
    nt::for_each_prime(2, x, [&](std::uint64_t p) {
        while (p > decade_to) close_decade();
        const unsigned __int128 partner = static_cast<unsigned __int128>(m) * p + 1;
        const bool prime = partner <= ~std::uint64_t{0}
                               ? nt::is_prime_u64(static_cast<std::uint64_t>(partner))
                               : nt::is_prime(nt::from_u64(m) * p + 1);
        if (!prime) return;
        total.add(1.0 / static_cast<double>(p));
        decade.add(1.0 / static_cast<double>(p));
        if (x <= 10'000) out.primes_counted.push_back(p);
    }, segment);
    while (decade_from < x) close_decade();
    out.sum = total.value();
    return out;
}

OrderTable qualifying_moduli(int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D) {
    if (D < 2) throw DomainError("qualifying_moduli: D must be >= 2");
    if (D > kMaxTruncation)
        throw BudgetExceeded("truncation D = " + std::to_string(D) + " exceeds " + std::to_string(kMaxTruncation));
    OrderTable table{K, a, j, l, D, {}};

    // Smallest prime factor sieve.
    std::vector<std::uint32_t> spf(D + 1, 0);
    for (std::uint64_t i = 2; i <= D; ++i) {
        if (spf[i] != 0) continue;
        for (std::uint64_t k = i; k <= D; k += i)
            if (spf[k] == 0) spf[k] = static_cast<std::uint32_t>(i);
    }
    // Per-prime cosets; state 0 = excluded prime, 1 = no solution, 2 = coset.
    std::vector<unsigned char> state(D + 1, 0);
    std::vector<nt::ExponentCoset> coset(D + 1);
    for (std::uint64_t p = 2; p <= D; ++p) {
        if (spf[p] != p) continue;
        if (p <= static_cast<std::uint64_t>(std::max(K, 0)) || a % p == 0) continue;
        if (auto c = nt::form_exponent_order_prime(a, j, l, p)) {
            state[p] = 2;
            coset[p] = *c;
        } else {
            state[p] = 1;
        }
    }

    table.records.push_back({1, 0, 1});
    for (std::uint64_t d = 2; d <= D; ++d) {
        std::uint64_t rest = d;
        unsigned omega = 0;
        bool usable = true;
        std::optional<nt::ExponentCoset> acc = nt::ExponentCoset{1, 1};
        while (rest > 1 && usable) {
            const std::uint64_t p = spf[rest];
            rest /= p;
            if (rest % p == 0 || state[p] != 2) {
                usable = false;  // not squarefree, excluded prime, or unsolvable
                break;
            }
            ++omega;
            acc = nt::intersect_cosets(*acc, coset[p]);
            if (!acc) usable = false;
        }
        if (usable) table.records.push_back({d, omega, acc->e});
    }
    return table;
}

ESum E_from_table(const OrderTable& table, std::uint64_t x, bool exact) {
    ESum out;
    out.x = x;
    out.D = table.D;
    Accumulator acc;
    mpq_class total = 0;
    for (const auto& r : table.records) {
        if (r.e > x) continue;
        const double weight = std::ldexp(1.0, static_cast<int>(r.omega));
        acc.add(weight / static_cast<double>(r.d));
        if (exact) total += mpq_class(mpz_class(1) << r.omega, nt::from_u64(r.d));
    }
    out.value = acc.value();
    const double lx = x >= 2 ? std::log(static_cast<double>(x)) : 0.0;
    out.ratio = lx > 0 ? out.value / (lx * lx) : 0.0;
    if (exact) {
        total.canonicalize();
        out.exact = total;
    }
    return out;
}

ESum E_truncated(std::uint64_t x, int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D,
                 bool exact) {
    return E_from_table(qualifying_moduli(K, a, j, l, D), x, exact);
}

TruncatedSum weighted_from_table(const OrderTable& table, bool exact) {
    TruncatedSum out;
    Accumulator acc;
    mpq_class total = 0;
    for (const auto& r : table.records) {
        const double weight = std::ldexp(1.0, static_cast<int>(r.omega));
        acc.add(weight / (static_cast<double>(r.d) * static_cast<double>(r.e)));
        if (exact) total += mpq_class(mpz_class(1) << r.omega, nt::from_u64(r.d) * nt::from_u64(r.e));
    }
    out.value = acc.value();
    if (exact) {
        total.canonicalize();
        out.exact = total;
    }
    return out;
}

TruncatedSum weighted_order_sum(int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D,
                                bool exact) {
    return weighted_from_table(qualifying_moduli(K, a, j, l, D), exact);
}

std::vector<DiagnosticsRow> run_diagnostics(const DiagnosticsRequest& request) {
    std::optional<OrderTable> table;
    if (request.e_params) {
        const auto& e = *request.e_params;
        table = qualifying_moduli(e.K, e.a, e.j, e.l, e.D);
    }
    std::vector<DiagnosticsRow> rows(request.grid.size());
    parallel_for(rows.size(), request.threads, [&](std::size_t idx) {
        const std::uint64_t x = request.grid[idx];
        DiagnosticsRow& row = rows[idx];
        row.x = x;
        row.mertens = mertens_sum(x, request.segment);
        row.pi = nt::prime_count(x, request.segment);
        if (x >= 59) row.pi_bounds = pi_bounds_check(x, request.segment);
        for (std::uint64_t m : request.brun_m) {
            BrunSum sum = brun_pair_sum(m, x, request.segment);
            sum.primes_counted.clear();
            row.brun.push_back(std::move(sum));
        }
        if (table) row.e_sum = E_from_table(*table, x);
    });
    return rows;
}

}  // namespace covercraft::analytics

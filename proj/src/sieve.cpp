#include "covercraft/sieve.hpp"

#include <algorithm>
#include <cmath>

#include "covercraft/errors.hpp"

namespace covercraft::nt {

std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t m = i * i; m <= limit; m += i) composite[m] = true;
    }
    return primes;
}

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& visit, std::uint64_t segment) {
    if (lo > hi) throw DomainError("for_each_prime: lo > hi");
    if (hi >= (~std::uint64_t{0} - (std::uint64_t{1} << 33)))
        throw DomainError("for_each_prime: upper bound too close to 2^64");
    if (segment < 64) segment = 64;
    if (hi < 2) return;
    if (lo <= 2) {
        visit(2);
        lo = 3;
    }
    if (lo > hi) return;
    if (lo % 2 == 0) ++lo;
    if (lo > hi) return;

    const auto root = static_cast<std::uint32_t>(isqrt(hi));
    const std::vector<std::uint32_t> base = small_primes(root);

    // Index t in a segment stands for the odd number start + 2t.
    std::vector<unsigned char> mark(segment);
    for (std::uint64_t start = lo; start <= hi;) {
        const std::uint64_t span_count = std::min<std::uint64_t>(segment, (hi - start) / 2 + 1);
        std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(span_count), 1);
        const std::uint64_t last = start + 2 * (span_count - 1);
        for (std::size_t idx = 1; idx < base.size(); ++idx) {
            const std::uint64_t p = base[idx];
            if (p * p > last) break;
            std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
            if (first % 2 == 0) first += p;
            for (std::uint64_t m = first; m <= last; m += 2 * p) mark[(m - start) / 2] = 0;
        }
        for (std::uint64_t t = 0; t < span_count; ++t) {
            if (!mark[t]) continue;
            const std::uint64_t n = start + 2 * t;
            if (n >= 3) visit(n);
        }
        if (last >= hi) break;
        start = last + 2;
    }
}

std::uint64_t prime_count(std::uint64_t x, std::uint64_t segment) {
    std::uint64_t count = 0;
    if (x < 2) return 0;
    for_each_prime(2, x, [&](std::uint64_t) { ++count; }, segment);
    return count;
}

}  // namespace covercraft::nt

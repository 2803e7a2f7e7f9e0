#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "covercraft/cover.hpp"

namespace covercraft::cover {

std::string to_string(const FormTriple& t) {
    std::ostringstream out;
    out << "(j=" << t.j << ", k=" << t.k << ", l=" << t.l << ")";
    return out.str();
}

std::vector<std::string> TargetConfig::problems() const {
    std::vector<std::string> out;
    if (K < 2) out.push_back("K must be >= 2 (got " + std::to_string(K) + ")");
    if (L.size() != static_cast<std::size_t>(std::max(K, 0)))
        out.push_back("L_N must have exactly K = " + std::to_string(K) + " elements (got " +
                      std::to_string(L.size()) + ")");
    if (std::set<std::int64_t>(L.begin(), L.end()).size() != L.size())
        out.push_back("L_N elements must be distinct");
    if (M < 1) out.push_back("M must be >= 1");
    if (a_min < 2) out.push_back("a range must start at 2 or above");
    if (a_min > a_max) out.push_back("a range is empty");
    if (K >= 2 && a_max > static_cast<std::uint64_t>(K))
        out.push_back("a range must lie within [2, K]");
    if (p_max < 2) out.push_back("p_max must be >= 2");
    if (factor_budget_bits < 8) out.push_back("factor budget must be >= 8 bits");
    if (min_pairs_per_class < 1) out.push_back("min_pairs_per_class must be >= 1");
    if (band && (band->low < 0 || band->low > band->high))
        out.push_back("band must satisfy 0 <= low <= high");
    return out;
}

void TargetConfig::validate() const {
    const auto issues = problems();
    if (issues.empty()) return;
    std::string message = "invalid configuration:";
    for (const auto& issue : issues) message += "\n  - " + issue;
    throw ConfigError(message);
}

Band TargetConfig::effective_band() const {
    if (band) return *band;
    const mpq_class cube = mpq_class(K) * K * K;
    Band out{mpq_class(static_cast<unsigned long>(M)) / (4 * cube),
             mpq_class(static_cast<unsigned long>(M)) / (3 * cube)};
    out.low.canonicalize();
    out.high.canonicalize();
    return out;
}

std::vector<FormTriple> TargetConfig::triples() const {
    std::vector<std::int64_t> offsets = L;
    std::sort(offsets.begin(), offsets.end());
    std::vector<FormTriple> out;
    for (std::int64_t j = -K; j <= K; ++j) {
        if (j == 0) continue;
        for (std::int64_t k = 1; k <= K; ++k)
            for (std::int64_t l : offsets) out.push_back({j, k, l});
    }
    return out;
}

std::vector<std::uint64_t> TargetConfig::bases() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t a = a_min; a <= a_max; ++a) out.push_back(a);
    return out;
}

std::vector<std::int64_t> multiples_offsets(int K, std::optional<std::uint64_t> prime) {
    if (K < 2) throw ConfigError("offset generator needs K >= 2");
    std::uint64_t p = prime.value_or(static_cast<std::uint64_t>(K) + 1);
    if (prime) {
        if (p <= static_cast<std::uint64_t>(K) || !nt::is_prime_u64(p))
            throw ConfigError("offset prime must be a prime above K (got " + std::to_string(p) + ")");
    } else {
        while (!nt::is_prime_u64(p)) ++p;
    }
    std::vector<std::int64_t> out;
    for (int t = 1; t <= K; ++t) out.push_back(static_cast<std::int64_t>(p) * t);
    return out;
}

std::vector<std::int64_t> factorial_offsets(int K) {
    if (K < 2) throw ConfigError("offset generator needs K >= 2");
    std::vector<std::int64_t> out;
    std::uint64_t fact = 1;
    for (int n = 2; n <= 2 * K - 1; ++n) {
        if (fact > std::numeric_limits<std::int64_t>::max() / static_cast<std::uint64_t>(n))
            throw ConfigError("factorial offsets overflow 64 bits for K = " + std::to_string(K));
        fact *= static_cast<std::uint64_t>(n);
        if (n >= K) out.push_back(static_cast<std::int64_t>(fact) + 1);
    }
    return out;
}

}  // namespace covercraft::cover

#include <algorithm>
#include <set>

#include "covercraft/cover.hpp"

namespace covercraft::cover {

bool Partition::all_in_band() const {
    return std::all_of(classes.begin(), classes.end(), [](const PairClass& c) { return c.in_band; });
}

Partition partition_pairs(const std::map<std::uint64_t, std::vector<PrimePair>>& pairs_by_base,
                          std::span<const FormTriple> triples, const Band& band,
                          std::size_t min_pairs_per_class) {
    if (band.low < 0) throw DomainError("partition_pairs: band.low must be >= 0");
    if (min_pairs_per_class < 1) min_pairs_per_class = 1;

    const std::size_t needed = triples.size() * min_pairs_per_class;
    std::string shortfall;
    for (const auto& [a, pairs] : pairs_by_base) {
        if (pairs.size() < needed)
            shortfall += "\n  a=" + std::to_string(a) + ": have " + std::to_string(pairs.size()) +
                         " pairs, need " + std::to_string(needed) + " (short " +
                         std::to_string(needed - pairs.size()) + ")";
        std::set<BigInt> seen;
        for (const auto& pair : pairs) {
            if (pair.a != a)
                throw DomainError("partition_pairs: pair filed under a=" + std::to_string(a) +
                                  " has a=" + std::to_string(pair.a));
            if (!seen.insert(pair.q).second)
                throw ConflictError("partition_pairs: q = " + nt::to_decimal(pair.q) +
                                    " repeated for a=" + std::to_string(a));
        }
    }
    if (!shortfall.empty()) throw InsufficientPairs("not enough prime pairs:" + shortfall);

    Partition out;
    out.band = band;
    for (const auto& [a, pairs] : pairs_by_base) {
        std::vector<PairClass> classes;
        classes.reserve(triples.size());
        for (const auto& triple : triples) classes.push_back(PairClass{ClassKey{a, triple}, {}, 0, false});

        std::vector<PrimePair> order = pairs;
        std::sort(order.begin(), order.end(), [](const PrimePair& x, const PrimePair& y) {
            return x.p != y.p ? x.p < y.p : x.q < y.q;
        });
        for (const auto& pair : order) {
            // Classes below quota first, then smallest running sum; ties by class order.
            std::size_t best = 0;
            for (std::size_t c = 1; c < classes.size(); ++c) {
                const bool c_short = classes[c].pairs.size() < min_pairs_per_class;
                const bool best_short = classes[best].pairs.size() < min_pairs_per_class;
                if (c_short != best_short) {
                    if (c_short) best = c;
                    continue;
                }
                if (classes[c].reciprocal_sum < classes[best].reciprocal_sum) best = c;
            }
            classes[best].pairs.push_back(pair);
            classes[best].reciprocal_sum += mpq_class(1, static_cast<unsigned long>(pair.p));
        }
        for (auto& c : classes) {
            std::sort(c.pairs.begin(), c.pairs.end(), [](const PrimePair& x, const PrimePair& y) {
                return x.p != y.p ? x.p < y.p : x.q < y.q;
            });
            c.in_band = c.reciprocal_sum >= band.low && c.reciprocal_sum <= band.high;
            out.classes.push_back(std::move(c));
        }
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const PairClass& x, const PairClass& y) { return x.key < y.key; });
    return out;
}

}  // namespace covercraft::cover

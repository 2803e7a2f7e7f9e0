#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "covercraft/cover.hpp"

namespace covercraft::cover {

namespace {

BigInt mod_floor(const BigInt& v, const BigInt& m) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

BigInt form_offset(std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t i) {
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), a, i);
    return nt::from_i64(j) * power + nt::from_i64(l);
}

}  // namespace

int compute_I(std::uint64_t a, std::int64_t j, std::int64_t l, const BigInt& q) {
    if (q < 2) throw DomainError("compute_I: q must be >= 2");
    if (mod_floor(form_offset(a, j, l, 0), q) != 0) return 0;
    if (mod_floor(form_offset(a, j, l, 1), q) != 0) return 1;
    throw InvariantViolation("compute_I: j + l and j*a + l both vanish mod q = " + nt::to_decimal(q) +
                             " (q <= K(K-1) was admitted)");
}

BigInt local_residue(const CoverEntry& entry) {
    const BigInt& q = entry.pair.q;
    const BigInt k = nt::from_i64(entry.triple.k);
    BigInt inverse;
    if (mpz_invert(inverse.get_mpz_t(), k.get_mpz_t(), q.get_mpz_t()) == 0)
        throw InvariantViolation("k = " + std::to_string(entry.triple.k) + " not invertible mod q = " +
                                 nt::to_decimal(q));
    const BigInt offset = form_offset(entry.a, entry.triple.j, entry.triple.l, static_cast<std::uint64_t>(entry.I));
    return mod_floor(-inverse * offset, q);
}

namespace {

bool covers_every_class(const std::vector<CoverEntry>& entries, const TargetConfig& config) {
    std::set<ClassKey> present;
    for (const auto& e : entries) present.insert({e.a, e.triple});
    for (std::uint64_t a : config.bases())
        for (const auto& t : config.triples())
            if (!present.contains({a, t})) return false;
    return true;
}

}  // namespace

CoveringSystem build_covering_system(const Partition& partition, const TargetConfig& config) {
    CoveringSystem system;
    system.config = config;
    std::set<BigInt> seen;
    for (const auto& cls : partition.classes) {
        for (const auto& pair : cls.pairs) {
            if (!seen.insert(pair.q).second)
                throw ConflictError("build_covering_system: q = " + nt::to_decimal(pair.q) +
                                    " used by more than one entry");
            CoverEntry entry{cls.key.a, cls.key.triple, pair,
                             compute_I(cls.key.a, cls.key.triple.j, cls.key.triple.l, pair.q)};
            system.entries.push_back(std::move(entry));
        }
    }
    std::vector<nt::Congruence> congruences;
    congruences.reserve(system.entries.size());
    for (const auto& entry : system.entries) congruences.push_back({local_residue(entry), entry.pair.q});
    const auto solution = nt::crt_combine(congruences);
    system.b = solution.b;
    system.W = solution.W;
    if (gcd(system.b, system.W) != 1)
        throw InvariantViolation("build_covering_system: gcd(b, W) != 1");
    system.partial = !covers_every_class(system.entries, config);
    return system;
}

std::string VerificationReport::summary() const {
    std::ostringstream out;
    out << (ok() ? "PASS" : "FAIL") << ": " << entries_checked << " entries, " << samples_checked
        << " samples, " << failures.size() << " failure(s)";
    for (const auto& f : failures) out << "\n  [" << f.check << "] " << f.detail;
    return out.str();
}

VerificationReport verify_covering_system(const CoveringSystem& system, const VerifyOptions& options) {
    VerificationReport report;
    auto fail = [&](std::string check, std::string detail) {
        report.failures.push_back({std::move(check), std::move(detail)});
    };
    const TargetConfig& config = system.config;
    for (const auto& issue : config.problems()) fail("config", issue);

    const auto triples = config.triples();
    const std::set<FormTriple> triple_set(triples.begin(), triples.end());
    std::set<BigInt> seen_q;
    BigInt product = 1;

    for (std::size_t idx = 0; idx < system.entries.size(); ++idx) {
        const auto& e = system.entries[idx];
        const std::string where = "entry " + std::to_string(idx) + " (a=" + std::to_string(e.a) + ", " +
                                  to_string(e.triple) + ", p=" + std::to_string(e.pair.p) +
                                  ", q=" + nt::to_decimal(e.pair.q) + ")";
        ++report.entries_checked;
        if (e.a < config.a_min || e.a > config.a_max) fail("base", where + ": a outside configured range");
        if (e.pair.a != e.a) fail("base", where + ": pair base differs from entry base");
        if (!triple_set.contains(e.triple)) fail("triple", where + ": triple not in R");
        for (const auto& issue : pair_problems(e.pair, config.M, config.K)) fail("pair", where + ": " + issue);
        if (e.pair.q < 2) continue;  // nothing below is meaningful without a modulus

        if (!seen_q.insert(e.pair.q).second) fail("distinct", where + ": q repeated");
        product *= e.pair.q;

        int expected_I = -1;
        try {
            expected_I = compute_I(e.a, e.triple.j, e.triple.l, e.pair.q);
        } catch (const Error& err) {
            fail("offset", where + ": " + err.what());
        }
        if (e.I != 0 && e.I != 1) fail("offset", where + ": I must be 0 or 1");
        else if (expected_I >= 0 && e.I != expected_I)
            fail("offset", where + ": I = " + std::to_string(e.I) + " but least valid exponent is " +
                               std::to_string(expected_I));

        const BigInt value = nt::from_i64(e.triple.k) * system.b +
                             form_offset(e.a, e.triple.j, e.triple.l, static_cast<std::uint64_t>(std::max(e.I, 0)));
        if (mod_floor(value, e.pair.q) != 0)
            fail("crt", where + ": q does not divide k*b + j*a^I + l");
    }

    if (product != system.W)
        fail("modulus", "W = " + nt::to_decimal(system.W) + " differs from the product of covering primes");
    if (system.b < 0 || system.b >= system.W) fail("residue", "b not in [0, W)");
    if (gcd(system.b, system.W) != 1) fail("residue", "gcd(b, W) != 1");

    if (!system.partial) {
        std::set<ClassKey> present;
        for (const auto& e : system.entries) present.insert({e.a, e.triple});
        for (std::uint64_t a : config.bases())
            for (const auto& t : triples)
                if (!present.contains({a, t}))
                    fail("coverage", "class (a=" + std::to_string(a) + ", " + to_string(t) + ") has no entry");
    }

    // Sampled covered slots: q | k*m + j*a^i + l for m = b + tW, i = I + sp.
    if (!system.entries.empty() && options.samples > 0) {
        std::mt19937_64 rng(options.seed);
        std::size_t sample_failures = 0;
        for (std::size_t n = 0; n < options.samples; ++n) {
            const auto& e = system.entries[rng() % system.entries.size()];
            const std::uint64_t t = rng() % (options.max_t + 1);
            std::uint64_t s = rng() % (options.max_s + 1);
            if (e.I <= 0 && s == 0) s = 1;
            const std::uint64_t i = static_cast<std::uint64_t>(std::max(e.I, 0)) + s * e.pair.p;
            const BigInt m = system.b + nt::from_u64(t) * system.W;
            const BigInt value = nt::from_i64(e.triple.k) * m + form_offset(e.a, e.triple.j, e.triple.l, i);
            ++report.samples_checked;
            if (e.pair.q < 2 || mpz_divisible_p(value.get_mpz_t(), e.pair.q.get_mpz_t()) == 0) {
                if (++sample_failures <= 20)
                    fail("sample", "q = " + nt::to_decimal(e.pair.q) + " does not divide the form at t = " +
                                       std::to_string(t) + ", i = " + std::to_string(i));
            }
        }
        if (sample_failures > 20)
            fail("sample", std::to_string(sample_failures - 20) + " further sample failures suppressed");
    }
    return report;
}

std::string system_digest(const CoveringSystem& system) {
    std::ostringstream text;
    const auto& c = system.config;
    text << "K=" << c.K << ";M=" << c.M << ";a=" << c.a_min << "-" << c.a_max << ";L=";
    for (auto l : c.L) text << l << ",";
    text << ";partial=" << system.partial << ";W=" << nt::to_decimal(system.W)
         << ";b=" << nt::to_decimal(system.b) << ";";
    for (const auto& e : system.entries)
        text << e.a << "," << e.triple.j << "," << e.triple.k << "," << e.triple.l << "," << e.pair.p << ","
             << nt::to_decimal(e.pair.q) << "," << e.I << ";";
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text.str()) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

CoverCheck verify_cover(std::span<const ResidueClass> classes, std::uint64_t lcm_bound) {
    CoverCheck out;
    std::uint64_t lcm = 1;
    for (const auto& c : classes) {
        if (c.modulus == 0) throw DomainError("verify_cover: modulus 0");
        const std::uint64_t g = std::gcd(lcm, c.modulus);
        const unsigned __int128 next = static_cast<unsigned __int128>(lcm / g) * c.modulus;
        if (next > lcm_bound)
            throw BudgetExceeded("verify_cover: lcm of moduli exceeds bound " + std::to_string(lcm_bound));
        lcm = static_cast<std::uint64_t>(next);
    }
    out.lcm = lcm;
    std::vector<bool> hit(lcm, false);
    for (const auto& c : classes)
        for (std::uint64_t r = c.residue % c.modulus; r < lcm; r += c.modulus) hit[r] = true;
    const auto first = std::find(hit.begin(), hit.end(), false);
    out.covers = first == hit.end();
    if (!out.covers) out.witness = static_cast<std::uint64_t>(first - hit.begin());
    return out;
}

mpq_class coverage_density(std::span<const std::uint64_t> moduli) {
    std::set<std::uint64_t> seen;
    mpq_class uncovered = 1;
    for (std::uint64_t p : moduli) {
        if (!seen.insert(p).second) throw DomainError("coverage_density: repeated modulus " + std::to_string(p));
        if (!nt::is_prime_u64(p)) throw DomainError("coverage_density: modulus " + std::to_string(p) + " not prime");
        uncovered *= mpq_class(p - 1, p);
    }
    mpq_class out = 1 - uncovered;
    out.canonicalize();
    return out;
}

}  // namespace covercraft::cover

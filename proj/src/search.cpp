#include "covercraft/search.hpp"

#include <chrono>
#include <cmath>

#include "covercraft/parallel.hpp"

namespace covercraft::search {

std::uint64_t exponent_limit(const BigInt& N, int K, cover::ExponentBound bound) {
    if (N < 2) throw DomainError("exponent_limit: N must be >= 2");
    long exp2 = 0;
    const double mantissa = mpz_get_d_2exp(&exp2, N.get_mpz_t());
    const double log_n = std::log(mantissa) + static_cast<double>(exp2) * std::log(2.0);
    const double x = static_cast<double>(K) * log_n;
    auto limit = static_cast<std::uint64_t>(std::ceil(x));
    if (bound == cover::ExponentBound::Exclusive && limit > 1) --limit;
    return std::max<std::uint64_t>(limit, 1);
}

SearchWindow make_window(const BigInt& N, int K, cover::ExponentBound bound, std::optional<BigInt> upper) {
    if (N < 2) throw DomainError("search window: N must be >= 2");
    if (K < 1) throw DomainError("search window: K must be >= 1");
    SearchWindow window;
    window.N = N;
    window.upper = upper ? *upper : BigInt(N + N / K);
    if (window.upper <= N) throw DomainError("search window: upper must exceed N");
    window.i_max = exponent_limit(N, K, bound);
    return window;
}

const char* to_string(FormStatus status) {
    switch (status) {
        case FormStatus::CompositeWitnessed: return "composite_witnessed";
        case FormStatus::CompositeChecked: return "composite_checked";
        case FormStatus::PrimeException: return "prime_exception";
        case FormStatus::UnitOrZeroException: return "unit_or_zero_exception";
        case FormStatus::SkippedZeroOffset: return "skipped_zero_offset";
    }
    return "unknown";
}

std::vector<BigInt> find_candidate_primes(const SearchWindow& window, const CoveringSystem& system) {
    if (system.W < 1) throw DomainError("find_candidate_primes: W must be >= 1");
    if (system.W == 1) return nt::primes_in_range(window.N, window.upper);
    BigInt shift;
    const BigInt delta = system.b - window.N;
    mpz_mod(shift.get_mpz_t(), delta.get_mpz_t(), system.W.get_mpz_t());
    std::vector<BigInt> out;
    for (BigInt m = window.N + shift; m <= window.upper; m += system.W)
        if (nt::is_prime(m)) out.push_back(m);
    return out;
}

FormVerifier::FormVerifier(const TargetConfig& config, const SearchWindow& window, const CoveringSystem& system)
    : config_(config), window_(window), W_(system.W), b_(system.b), triples_(config.triples()) {
    const BigInt bound = BigInt(config.K) * window.N;
    for (std::int64_t l : config.L)
        if (abs(nt::from_i64(l)) > bound)
            throw ConfigError("offset l = " + std::to_string(l) + " exceeds K*N = " + nt::to_decimal(bound));
    for (std::uint64_t a = 1; a <= static_cast<std::uint64_t>(config.K); ++a) {
        bases_.push_back(a);
        std::vector<BigInt> row(window.i_max + 1);
        row[0] = 1;
        for (std::uint64_t i = 1; i <= window.i_max; ++i) row[i] = row[i - 1] * a;
        powers_.push_back(std::move(row));
    }
    for (const auto& e : system.entries)
        slots_[{e.a, e.triple}].push_back(
            Slot{e.pair.p, static_cast<std::uint64_t>(e.I) % e.pair.p, e.pair.q});
}

std::vector<FormOutcome> FormVerifier::verify(const BigInt& m) const {
    BigInt delta = m - b_;
    if (mpz_divisible_p(delta.get_mpz_t(), W_.get_mpz_t()) == 0)
        throw DomainError("verify_forms: m = " + nt::to_decimal(m) + " is not = b (mod W)");

    std::vector<FormOutcome> out;
    out.reserve(triples_.size() * (1 + (bases_.size() - 1) * window_.i_max));
    BigInt offset, value, magnitude;
    for (std::uint64_t a : bases_) {
        const std::uint64_t i_top = a == 1 ? 1 : window_.i_max;
        for (std::uint64_t i = 1; i <= i_top; ++i) {
            const BigInt& power = powers_[a - 1][i];
            for (const auto& t : triples_) {
                FormOutcome o;
                o.a = a;
                o.i = i;
                o.triple = t;
                offset = nt::from_i64(t.j) * power + nt::from_i64(t.l);
                value = nt::from_i64(t.k) * m + offset;
                o.value = value;
                o.witness = 0;
                if (offset == 0) {
                    o.status = FormStatus::SkippedZeroOffset;
                    out.push_back(std::move(o));
                    continue;
                }
                magnitude = abs(value);
                const Slot* slot = nullptr;
                if (auto it = slots_.find({a, t}); it != slots_.end()) {
                    for (const auto& s : it->second)
                        if (i % s.p == s.residue) {
                            slot = &s;
                            break;
                        }
                }
                if (magnitude <= 1) {
                    o.status = FormStatus::UnitOrZeroException;
                } else if (slot != nullptr) {
                    if (mpz_divisible_p(value.get_mpz_t(), slot->q.get_mpz_t()) == 0)
                        throw VerificationError("covered slot not divisible: q = " + nt::to_decimal(slot->q) +
                                                ", m = " + nt::to_decimal(m) + ", a = " + std::to_string(a) +
                                                ", i = " + std::to_string(i) + ", " + cover::to_string(t));
                    o.witness = slot->q;
                    o.status = magnitude == slot->q ? FormStatus::PrimeException : FormStatus::CompositeWitnessed;
                } else {
                    o.status = nt::is_prime(magnitude) ? FormStatus::PrimeException : FormStatus::CompositeChecked;
                }
                out.push_back(std::move(o));
            }
        }
    }
    return out;
}

std::vector<FormOutcome> verify_forms(const BigInt& m, const TargetConfig& config, const SearchWindow& window,
                                      const CoveringSystem& system) {
    return FormVerifier(config, window, system).verify(m);
}

SearchReport run_experiment(const TargetConfig& config, const SearchWindow& window, const CoveringSystem& system,
                            const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();
    SearchReport report;
    report.config = config;
    report.window = window;
    report.system_digest = cover::system_digest(system);

    const FormVerifier verifier(config, window, system);
    const std::vector<BigInt> candidates = find_candidate_primes(window, system);
    report.Q_N = candidates.size();
    report.candidates.resize(candidates.size());

    parallel_for(candidates.size(), options.threads, [&](std::size_t idx) {
        CandidateRecord& rec = report.candidates[idx];
        rec.m = candidates[idx];
        for (auto& o : verifier.verify(rec.m)) {
            switch (o.status) {
                case FormStatus::CompositeWitnessed: ++rec.witnessed; break;
                case FormStatus::CompositeChecked: ++rec.checked; break;
                case FormStatus::SkippedZeroOffset: ++rec.skipped; break;
                case FormStatus::PrimeException: ++rec.prime_exceptions; break;
                case FormStatus::UnitOrZeroException: ++rec.unit_exceptions; break;
            }
            if (o.is_exception()) rec.exceptions.push_back(std::move(o));
        }
        rec.survivor = rec.exceptions.empty();
    });

    for (const auto& rec : report.candidates) {
        if (rec.survivor) report.survivors.push_back(rec.m);
        for (const auto& o : rec.exceptions) {
            Tally& tally = report.tallies[{o.a, o.i, o.triple}];
            if (o.status == FormStatus::PrimeException) ++tally.prime;
            else ++tally.unit_or_zero;
        }
    }
    report.Q = report.survivors.size();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace covercraft::search

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "covercraft/analytics.hpp"
#include "covercraft/cover.hpp"
#include "covercraft/search.hpp"
#include "covercraft/serialize.hpp"

namespace py = pybind11;

// Python int <-> mpz_class through the decimal text form.
namespace pybind11::detail {
template <>
struct type_caster<mpz_class> {
    PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

    bool load(handle src, bool) {
        if (!src || !PyLong_Check(src.ptr())) return false;
        const std::string text = py::str(src);
        return value.set_str(text, 10) == 0;
    }

    static handle cast(const mpz_class& v, return_value_policy, handle) {
        const std::string text = v.get_str(10);
        return PyLong_FromString(text.c_str(), nullptr, 10);
    }
};
}  // namespace pybind11::detail

namespace {

using namespace covercraft;
using nt::BigInt;

py::object fraction(const mpq_class& q) {
    static py::object Fraction = py::module_::import("fractions").attr("Fraction");
    return Fraction(py::str(q.get_str(10)));
}

cover::TargetConfig make_target(int K, std::vector<std::int64_t> L, std::uint64_t M, std::uint64_t a_min,
                                std::uint64_t a_max) {
    cover::TargetConfig t;
    t.K = K;
    t.L = std::move(L);
    t.M = M;
    t.a_min = a_min;
    t.a_max = a_max;
    return t;
}

py::list factor_list(const nt::Factorization& f) {
    py::list out;
    for (const auto& pp : f.factors) out.append(py::make_tuple(pp.prime, pp.exponent));
    return out;
}

std::string build_system(const std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, BigInt>>>& pairs,
                         int K, std::vector<std::int64_t> L, std::uint64_t M,
                         std::optional<std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>> triples,
                         std::size_t min_pairs, bool largest_q) {
    std::uint64_t a_min = pairs.empty() ? 2 : pairs.begin()->first;
    std::uint64_t a_max = pairs.empty() ? 2 : pairs.rbegin()->first;
    auto target = make_target(K, std::move(L), M, a_min, a_max);
    target.min_pairs_per_class = min_pairs;
    target.largest_q_per_anchor = largest_q;
    target.validate();

    std::vector<cover::PrimePair> flat;
    for (const auto& [a, list] : pairs)
        for (const auto& [p, q] : list) flat.push_back({a, p, q});
    std::map<std::uint64_t, std::vector<cover::PrimePair>> by_base;
    for (const auto& [a, list] : pairs) by_base[a];
    for (const auto& pair : cover::select_distinct(flat, largest_q)) by_base[pair.a].push_back(pair);

    std::vector<cover::FormTriple> chosen;
    if (triples) {
        for (const auto& [j, k, l] : *triples) chosen.push_back({j, k, l});
        std::sort(chosen.begin(), chosen.end());
    } else {
        chosen = target.triples();
    }
    const auto partition = cover::partition_pairs(by_base, chosen, target.effective_band(), min_pairs);
    return io::system_document(cover::build_covering_system(partition, target)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "covercraft: covering-congruence construction and verification";
    m.attr("__version__") = io::tool_version();

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base);
    py::register_exception<ConflictError>(m, "ConflictError", base);
    py::register_exception<InsufficientPairs>(m, "InsufficientPairs", base);
    py::register_exception<InvariantViolation>(m, "InvariantViolation", base);
    py::register_exception<GuardError>(m, "GuardError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<VerificationError>(m, "VerificationError", base);

    // ntcore
    m.def("is_prime", [](const BigInt& n) { return nt::is_prime(n); }, py::arg("n"));
    m.def(
        "factor",
        [](const BigInt& n, unsigned bits) {
            nt::FactorOptions options;
            options.max_cofactor_bits = bits;
            return factor_list(nt::factor(n, options));
        },
        py::arg("n"), py::arg("max_cofactor_bits") = 96, "[(prime, exponent), ...] in increasing order");
    m.def("mod_pow", &nt::mod_pow, py::arg("base"), py::arg("exponent"), py::arg("modulus"));
    m.def(
        "multiplicative_order", [](const BigInt& a, const BigInt& q) { return nt::multiplicative_order(a, q); },
        py::arg("a"), py::arg("q"));
    m.def(
        "crt_combine",
        [](const std::vector<std::pair<BigInt, BigInt>>& pairs) {
            std::vector<nt::Congruence> cs;
            for (const auto& [r, mod] : pairs) cs.push_back({r, mod});
            const auto s = nt::crt_combine(cs);
            return std::make_pair(s.b, s.W);
        },
        py::arg("congruences"), "[(residue, modulus), ...] -> (b, W)");
    m.def(
        "form_exponent_order",
        [](std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t d)
            -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
            const auto c = nt::form_exponent_order(a, j, l, d);
            if (!c) return std::nullopt;
            return std::make_pair(c->e, c->period);
        },
        py::arg("a"), py::arg("j"), py::arg("l"), py::arg("d"), "(e, period) or None");
    m.def(
        "primes_in_range", [](const BigInt& lo, const BigInt& hi) { return nt::primes_in_range(lo, hi); },
        py::arg("lo"), py::arg("hi"));

    // cover
    m.def(
        "find_prime_pairs",
        [](std::uint64_t a, std::uint64_t M, std::uint64_t p_max, int K, unsigned bits, unsigned threads) {
            cover::MiningOptions options;
            options.factoring.max_cofactor_bits = bits;
            options.threads = threads;
            std::vector<std::pair<std::uint64_t, BigInt>> out;
            py::gil_scoped_release release;
            for (const auto& pair : cover::find_prime_pairs(a, M, p_max, K, options).pairs)
                out.emplace_back(pair.p, pair.q);
            return out;
        },
        py::arg("a"), py::arg("M"), py::arg("p_max"), py::arg("K"), py::arg("max_cofactor_bits") = 96,
        py::arg("threads") = 1, "[(p, q), ...] sorted by (p, q)");
    m.def("admissible_anchor", &cover::admissible_anchor, py::arg("p"), py::arg("M"));
    m.def(
        "compute_I",
        [](std::uint64_t a, std::int64_t j, std::int64_t l, const BigInt& q) { return cover::compute_I(a, j, l, q); },
        py::arg("a"), py::arg("j"), py::arg("l"), py::arg("q"));
    m.def("_build_system", &build_system, py::arg("pairs"), py::arg("K"), py::arg("L"), py::arg("M") = 2,
          py::arg("triples") = py::none(), py::arg("min_pairs_per_class") = 1, py::arg("largest_q_per_anchor") = true);
    m.def(
        "_verify_system",
        [](const std::string& doc, std::size_t samples, std::uint64_t seed) {
            const auto system = io::load_system(io::json::parse(doc), false);
            return io::verification_to_json(cover::verify_covering_system(system, {samples, seed})).dump();
        },
        py::arg("doc"), py::arg("samples") = 1000, py::arg("seed") = 1);
    m.def(
        "verify_cover",
        [](const std::vector<std::pair<std::uint64_t, std::uint64_t>>& classes) {
            std::vector<cover::ResidueClass> rc;
            for (const auto& [r, mod] : classes) rc.push_back({r, mod});
            const auto check = cover::verify_cover(rc);
            return std::make_pair(check.covers, check.witness);
        },
        py::arg("classes"), "[(residue, modulus), ...] -> (covers, least uncovered residue or None)");
    m.def(
        "coverage_density", [](const std::vector<std::uint64_t>& moduli) { return fraction(cover::coverage_density(moduli)); },
        py::arg("moduli"));

    // search
    m.def(
        "_search",
        [](const std::string& doc, const BigInt& N, std::optional<BigInt> upper, bool exclusive, unsigned threads) {
            const auto system = io::load_system(io::json::parse(doc), true);
            auto target = system.config;
            target.exponent_bound = exclusive ? cover::ExponentBound::Exclusive : cover::ExponentBound::Inclusive;
            const auto window = search::make_window(N, target.K, target.exponent_bound, upper);
            py::gil_scoped_release release;
            return io::report_jsonl(search::run_experiment(target, window, system, {threads}));
        },
        py::arg("doc"), py::arg("N"), py::arg("upper") = py::none(), py::arg("exclusive") = false,
        py::arg("threads") = 1);
    m.def(
        "brute_oracle",
        [](int K, std::vector<std::int64_t> L, const BigInt& N, std::optional<BigInt> upper, unsigned threads) {
            const auto target = make_target(K, std::move(L), 2, 2, static_cast<std::uint64_t>(K));
            target.validate();
            const auto window = search::make_window(N, K, target.exponent_bound, upper);
            py::gil_scoped_release release;
            return search::brute_oracle(window, target, threads);
        },
        py::arg("K"), py::arg("L"), py::arg("N"), py::arg("upper") = py::none(), py::arg("threads") = 1);

    // analytics
    m.def(
        "mertens_sum",
        [](std::uint64_t x) {
            const auto c = analytics::mertens_sum(x);
            return py::dict(py::arg("x") = c.x, py::arg("sum") = c.sum, py::arg("loglog") = c.loglog,
                            py::arg("ok") = c.ok());
        },
        py::arg("x"));
    m.def(
        "pi_bounds_check",
        [](std::uint64_t x) {
            const auto c = analytics::pi_bounds_check(x);
            return py::dict(py::arg("x") = c.x, py::arg("pi") = c.pi, py::arg("lower") = c.lower,
                            py::arg("upper") = c.upper, py::arg("ok") = c.ok);
        },
        py::arg("x"));
    m.def("prime_count", [](std::uint64_t x) { return nt::prime_count(x); }, py::arg("x"));
    m.def(
        "brun_pair_sum", [](std::uint64_t mult, std::uint64_t x) { return analytics::brun_pair_sum(mult, x).sum; },
        py::arg("m"), py::arg("x"));
    m.def(
        "E_truncated",
        [](std::uint64_t x, int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D, bool exact)
            -> py::object {
            const auto s = analytics::E_truncated(x, K, a, j, l, D, exact);
            return exact ? fraction(*s.exact) : py::float_(s.value);
        },
        py::arg("x"), py::arg("K"), py::arg("a"), py::arg("j"), py::arg("l"), py::arg("D"), py::arg("exact") = false);
    m.def(
        "weighted_order_sum",
        [](int K, std::uint64_t a, std::int64_t j, std::int64_t l, std::uint64_t D, bool exact) -> py::object {
            const auto s = analytics::weighted_order_sum(K, a, j, l, D, exact);
            return exact ? fraction(*s.exact) : py::float_(s.value);
        },
        py::arg("K"), py::arg("a"), py::arg("j"), py::arg("l"), py::arg("D"), py::arg("exact") = false);
}

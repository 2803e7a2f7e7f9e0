// covercraft: command-line driver for the pair -> cover -> search pipeline.
//
// Exit codes: 0 success, 1 configuration error, 2 resource or feasibility
// limit, 3 verification failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "covercraft/analytics.hpp"
#include "covercraft/cover.hpp"
#include "covercraft/parallel.hpp"
#include "covercraft/run_config.hpp"
#include "covercraft/search.hpp"
#include "covercraft/serialize.hpp"

namespace {

using namespace covercraft;
using nt::BigInt;

enum Exit { kOk = 0, kConfig = 1, kResource = 2, kVerify = 3 };

struct Flags {
    std::string config_path;
    std::string save_config;
    unsigned threads = 0;

    int K = 2;
    std::uint64_t M = 2;
    std::vector<std::int64_t> L;
    std::string offsets;
    std::uint64_t offset_prime = 0;
    std::uint64_t a = 2;
    std::vector<std::uint64_t> a_range;
    std::uint64_t p_max = 0;
    unsigned factor_budget = 96;
    std::vector<std::string> band;
    std::size_t min_pairs = 1;
    bool all_q = false;
    std::string N;
    std::string upper;
    std::string i_bound;
    std::uint64_t seed = 1;
    std::size_t samples = 0;

    std::vector<std::uint64_t> grid;
    std::vector<std::uint64_t> brun_m;
    std::uint64_t e_D = 0;
    bool no_e = false;

    std::string out;
    std::string pairs_in;
    std::string system_in;
    std::vector<std::string> triples;
    bool check_oracle = false;
    bool timing = false;
    std::string verify_target;
};

void add_target_flags(CLI::App* app, Flags& f) {
    app->add_option("--K", f.K, "number of offsets K (>= 2)");
    app->add_option("--M", f.M, "anchor multiplier M: covering primes need q >= M p");
    app->add_option("--L", f.L, "explicit offset set L_N, comma separated")->delimiter(',');
    app->add_option("--offsets", f.offsets, "offset preset: explicit, multiples, factorial");
    app->add_option("--offset-prime", f.offset_prime, "prime p(K) > K for the multiples preset");
    app->add_option("--a", f.a, "single base a");
    app->add_option("--a-range", f.a_range, "base range lo,hi")->delimiter(',')->expected(2);
    app->add_option("--p-max", f.p_max, "largest anchor prime");
    app->add_option("--factor-budget", f.factor_budget, "largest composite cofactor attacked, in bits");
    app->add_option("--band", f.band, "reciprocal-sum band low,high (rationals)")->delimiter(',')->expected(2);
    app->add_option("--min-pairs", f.min_pairs, "minimum pairs per (a, triple) class");
    app->add_flag("--all-q", f.all_q, "keep every covering prime of an anchor, not only the largest");
    app->add_option("--seed", f.seed, "seed for sampled checks");
    app->add_option("--samples", f.samples, "sampled (m, i) divisibility checks");
}

void add_window_flags(CLI::App* app, Flags& f) {
    app->add_option("--N", f.N, "window start N");
    app->add_option("--upper", f.upper, "window end (default floor((1 + 1/K) N))");
    app->add_option("--i-bound", f.i_bound, "exponent bound: inclusive or exclusive");
}

bool given(const CLI::App* app, const std::string& name) {
    try {
        return app->count(name) > 0;
    } catch (const CLI::OptionNotFound&) {
        return false;
    }
}

cover::Band parse_band(const std::vector<std::string>& text) {
    try {
        cover::Band band{mpq_class(text.at(0)), mpq_class(text.at(1))};
        band.low.canonicalize();
        band.high.canonicalize();
        return band;
    } catch (const std::exception&) {
        throw ConfigError("--band expects two rationals, e.g. 1/16,1/12");
    }
}

BigInt parse_big(const std::string& text, const char* name) {
    try {
        return nt::from_decimal(text);
    } catch (const DomainError&) {
        throw ConfigError(std::string(name) + " must be a decimal integer (got '" + text + "')");
    }
}

// Defaults, then --config, then explicitly given flags.
RunConfig effective_config(const CLI::App* app, const CLI::App* sub, const Flags& f) {
    RunConfig c = default_run_config();
    if (!f.config_path.empty()) c = run_config_from_json(io::read_json(f.config_path));
    auto& t = c.target;
    auto has = [&](const std::string& name) { return given(sub, name) || given(app, name); };

    const bool k_changed = has("--K") && f.K != t.K;
    if (has("--K")) t.K = f.K;
    if (has("--M")) t.M = f.M;
    if (has("--offset-prime")) c.offset_prime = f.offset_prime;
    if (has("--offsets")) c.offsets = offset_preset_from(f.offsets);
    if (has("--L")) {
        c.offsets = OffsetPreset::Explicit;
        t.L = f.L;
    } else if (c.offsets != OffsetPreset::Explicit && t.K >= 2) {
        c.resolve_offsets();
    }
    if (has("--a")) t.a_min = t.a_max = f.a;
    else if (has("--a-range")) {
        t.a_min = f.a_range.at(0);
        t.a_max = f.a_range.at(1);
    } else if (k_changed && f.config_path.empty()) {
        t.a_min = 2;
        t.a_max = static_cast<std::uint64_t>(std::max(t.K, 2));
    }
    if (has("--p-max")) t.p_max = f.p_max;
    if (has("--factor-budget")) t.factor_budget_bits = f.factor_budget;
    if (has("--band")) t.band = parse_band(f.band);
    if (has("--min-pairs")) t.min_pairs_per_class = f.min_pairs;
    if (has("--all-q")) t.largest_q_per_anchor = false;
    if (has("--seed")) c.seed = f.seed;
    if (has("--samples")) c.samples = f.samples;
    if (has("--N")) c.N = parse_big(f.N, "--N");
    if (has("--upper")) c.upper = parse_big(f.upper, "--upper");
    if (has("--i-bound")) {
        if (f.i_bound == "inclusive") t.exponent_bound = cover::ExponentBound::Inclusive;
        else if (f.i_bound == "exclusive") t.exponent_bound = cover::ExponentBound::Exclusive;
        else throw ConfigError("--i-bound must be inclusive or exclusive");
    }
    if (has("--grid")) c.grid = f.grid;
    if (has("--brun-m")) c.brun_m = f.brun_m;
    if (has("--e-D")) c.e_params.D = f.e_D;
    if (has("--threads")) c.threads = f.threads;
    return c;
}

std::string output_path(const Flags& f, const std::string& fallback) { return f.out.empty() ? fallback : f.out; }

std::string decimal(const mpq_class& q, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, q.get_d());
    return buf;
}

// ---------------------------------------------------------------------------

int cmd_pairs(const RunConfig& c, const Flags& f) {
    const auto& t = c.target;
    t.validate();
    cover::MiningOptions options;
    options.factoring.max_cofactor_bits = t.factor_budget_bits;
    options.threads = resolve_threads(c.threads);

    std::vector<io::MinedBase> mined;
    std::vector<cover::PrimePair> all;
    for (std::uint64_t a : t.bases()) {
        io::MinedBase base{a, cover::find_prime_pairs(a, t.M, t.p_max, t.K, options)};
        all.insert(all.end(), base.result.pairs.begin(), base.result.pairs.end());
        mined.push_back(std::move(base));
    }
    const std::string path = output_path(f, c.outputs.pairs);
    io::write_json(path, io::pairs_document(t, mined));

    const auto kept = cover::select_distinct(all, t.largest_q_per_anchor);
    std::map<std::uint64_t, std::size_t> per_base;
    for (const auto& pair : kept) ++per_base[pair.a];
    const std::size_t needed = t.triples().size() * t.min_pairs_per_class;

    bool short_any = false;
    std::cout << "wrote " << path << "\n";
    for (const auto& base : mined) {
        const std::size_t have = per_base[base.a];
        std::cout << "a=" << base.a << ": " << base.result.anchors.size() << " anchors, " << base.result.skipped()
                  << " over budget, " << base.result.pairs.size() << " pairs, " << have << " distinct, need "
                  << needed << "\n";
        for (const auto& pair : base.result.pairs)
            std::cout << "  (" << pair.p << ", " << nt::to_decimal(pair.q) << ")\n";
        if (have < needed) short_any = true;
    }
    if (short_any) {
        std::cerr << "shortfall: fewer distinct pairs than |R| * min_pairs_per_class = " << needed << "\n";
        return kResource;
    }
    return kOk;
}

std::vector<cover::FormTriple> chosen_triples(const cover::TargetConfig& t, const std::vector<std::string>& specs) {
    const auto all = t.triples();
    if (specs.empty()) return all;
    std::vector<cover::FormTriple> out;
    for (const auto& spec : specs) {
        cover::FormTriple triple;
        char c1 = 0, c2 = 0;
        std::istringstream in(spec);
        if (!(in >> triple.j >> c1 >> triple.k >> c2 >> triple.l) || c1 != ',' || c2 != ',')
            throw ConfigError("--triple expects j,k,l (got '" + spec + "')");
        if (std::find(all.begin(), all.end(), triple) == all.end())
            throw ConfigError("--triple " + spec + " is not in R for K=" + std::to_string(t.K));
        if (std::find(out.begin(), out.end(), triple) == out.end()) out.push_back(triple);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int cmd_cover(const RunConfig& c, const Flags& f) {
    const auto& t = c.target;
    t.validate();
    const std::string pairs_path = f.pairs_in.empty() ? c.outputs.pairs : f.pairs_in;
    const auto file = io::load_pairs(io::read_json(pairs_path));
    if (file.M != t.M || file.K != t.K)
        throw ConfigError("pairs file was mined for M=" + std::to_string(file.M) + ", K=" + std::to_string(file.K) +
                          " but the configuration has M=" + std::to_string(t.M) + ", K=" + std::to_string(t.K));

    std::vector<cover::PrimePair> flat;
    for (std::uint64_t a : t.bases()) {
        const auto it = file.pairs_by_base.find(a);
        if (it == file.pairs_by_base.end())
            throw ConfigError("pairs file has no entry for base a=" + std::to_string(a));
        flat.insert(flat.end(), it->second.begin(), it->second.end());
    }
    std::map<std::uint64_t, std::vector<cover::PrimePair>> by_base;
    for (std::uint64_t a : t.bases()) by_base[a];
    for (const auto& pair : cover::select_distinct(flat, t.largest_q_per_anchor)) by_base[pair.a].push_back(pair);

    const auto triples = chosen_triples(t, f.triples);
    const auto partition = cover::partition_pairs(by_base, triples, t.effective_band(), t.min_pairs_per_class);
    const auto system = cover::build_covering_system(partition, t);
    const auto report = cover::verify_covering_system(system, {c.samples, c.seed});
    if (!report.ok()) {
        std::cerr << report.summary() << "\n";
        return kVerify;
    }
    const std::string path = output_path(f, c.outputs.cover);
    io::write_json(path, io::system_document(system));

    std::cout << "wrote " << path << "\n";
    std::cout << "entries: " << system.entries.size() << (system.partial ? " (partial)" : "") << "\n";
    std::cout << "W: " << mpz_sizeinbase(system.W.get_mpz_t(), 2) << " bits\n";
    if (mpz_sizeinbase(system.W.get_mpz_t(), 10) <= 40)
        std::cout << "b mod W: " << nt::to_decimal(system.b) << " mod " << nt::to_decimal(system.W) << "\n";
    std::cout << "band: [" << partition.band.low.get_str() << ", " << partition.band.high.get_str() << "]\n";
    std::cout << "class                               pairs  sum(1/p)  in_band  density\n";
    for (const auto& cls : partition.classes) {
        std::vector<std::uint64_t> anchors;
        for (const auto& pair : cls.pairs) anchors.push_back(pair.p);
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
        std::ostringstream label;
        label << "a=" << cls.key.a << " " << cover::to_string(cls.key.triple);
        char line[160];
        std::snprintf(line, sizeof(line), "%-36s %5zu  %8s  %-7s  %s\n", label.str().c_str(), cls.pairs.size(),
                      decimal(cls.reciprocal_sum).c_str(), cls.in_band ? "yes" : "no",
                      decimal(cover::coverage_density(anchors)).c_str());
        std::cout << line;
    }
    std::cout << report.summary() << "\n";
    return kOk;
}

int cmd_search(const RunConfig& c, const Flags& f) {
    const std::string system_path = f.system_in.empty() ? c.outputs.cover : f.system_in;
    const auto system = io::load_system(io::read_json(system_path), true, {c.samples, c.seed});
    cover::TargetConfig target = system.config;
    target.exponent_bound = c.target.exponent_bound;

    RunConfig checked = c;
    checked.target.K = target.K;
    checked.target.L = target.L;
    checked.target.M = target.M;
    checked.target.a_min = target.a_min;
    checked.target.a_max = target.a_max;
    checked.validate();

    const auto window = search::make_window(c.N, target.K, target.exponent_bound, c.upper);
    const unsigned threads = resolve_threads(c.threads);
    const auto report = search::run_experiment(target, window, system, {threads});
    const std::string path = output_path(f, c.outputs.report);
    io::write_text(path, io::report_jsonl(report, f.timing));

    std::cout << "wrote " << path << "\n";
    std::cout << "window [" << nt::to_decimal(window.N) << ", " << nt::to_decimal(window.upper)
              << "], i <= " << window.i_max << "\n";
    std::cout << "Q_N = " << report.Q_N << ", Q = " << report.Q << "\n";
    if (f.timing) std::cout << "wall " << report.wall_seconds << " s\n";
    if (report.Q > report.Q_N) {
        std::cerr << "invariant violated: Q > Q_N\n";
        return kVerify;
    }
    if (!f.check_oracle) return kOk;

    const auto oracle = search::brute_oracle(window, target, threads);
    const std::set<BigInt> accepted(oracle.begin(), oracle.end());
    std::size_t missing = 0;
    for (const auto& m : report.survivors) {
        if (accepted.contains(m)) continue;
        ++missing;
        std::cerr << "survivor " << nt::to_decimal(m) << " rejected by the brute-force oracle\n";
    }
    std::cout << "oracle: " << oracle.size() << " survivors in window, " << report.survivors.size()
              << " from the pipeline, " << missing << " discrepancies\n";
    return missing == 0 ? kOk : kVerify;
}

int cmd_oracle(const RunConfig& c, const Flags& f) {
    c.validate();
    const auto window = search::make_window(c.N, c.target.K, c.target.exponent_bound, c.upper);
    const auto survivors = search::brute_oracle(window, c.target, resolve_threads(c.threads));
    const std::string path = output_path(f, c.outputs.oracle);
    io::write_json(path, io::oracle_document(window, c.target, survivors));
    std::cout << "wrote " << path << "\n";
    std::cout << survivors.size() << " survivors in [" << nt::to_decimal(window.N) << ", "
              << nt::to_decimal(window.upper) << "]\n";
    for (const auto& m : survivors) std::cout << "  " << nt::to_decimal(m) << "\n";
    return kOk;
}

int cmd_analyze(const RunConfig& c, const Flags& f) {
    c.validate();
    analytics::DiagnosticsRequest request;
    request.grid = c.grid;
    request.brun_m = c.brun_m;
    if (f.no_e) request.e_params.reset();
    else request.e_params = c.e_params;
    request.threads = resolve_threads(c.threads);
    const auto rows = analytics::run_diagnostics(request);
    const std::string path = output_path(f, c.outputs.diagnostics);
    io::write_json(path, io::diagnostics_document(request, rows));

    std::cout << "wrote " << path << "\n";
    bool all_ok = true;
    std::printf("%12s %12s %12s %7s %9s %7s", "x", "sum 1/p", "loglog x", "mertens", "pi(x)", "pi bnd");
    for (auto m : request.brun_m) std::printf(" %10s", ("brun m=" + std::to_string(m)).c_str());
    if (request.e_params) std::printf(" %12s %9s", "E(x)", "E/ln^2x");
    std::printf("\n");
    for (const auto& row : rows) {
        std::printf("%12llu %12.9f %12.9f %7s %9llu %7s", static_cast<unsigned long long>(row.x), row.mertens.sum,
                    row.mertens.loglog, row.mertens.ok() ? "ok" : "FAIL", static_cast<unsigned long long>(row.pi),
                    row.pi_bounds ? (row.pi_bounds->ok ? "ok" : "FAIL") : "-");
        for (const auto& b : row.brun) std::printf(" %10.6f", b.sum);
        if (row.e_sum) std::printf(" %12.6f %9.6f", row.e_sum->value, row.e_sum->ratio);
        std::printf("\n");
        if (!row.mertens.ok() || (row.pi_bounds && !row.pi_bounds->ok)) all_ok = false;
    }
    std::fflush(stdout);
    return all_ok ? kOk : kVerify;
}

int cmd_verify(const RunConfig& c, const Flags& f) {
    const auto doc = io::read_json(f.verify_target);
    const std::string schema = doc.is_object() ? doc.value("schema", std::string()) : std::string();
    if (schema == io::kPairsSchema) {
        const auto file = io::load_pairs(doc);
        std::size_t count = 0;
        for (const auto& [a, pairs] : file.pairs_by_base) count += pairs.size();
        std::cout << "PASS: " << count << " pairs re-verified (M=" << file.M << ", K=" << file.K << ")\n";
        return kOk;
    }
    if (schema == io::kConfigSchema) {
        run_config_from_json(doc).validate();
        std::cout << "PASS: configuration is valid\n";
        return kOk;
    }
    const auto system = io::load_system(doc, false);
    const auto report = cover::verify_covering_system(system, {c.samples, c.seed});
    if (!f.out.empty()) io::write_json(f.out, io::verification_to_json(report));
    (report.ok() ? std::cout : std::cerr) << report.summary() << "\n";
    return report.ok() ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"covercraft: covering systems for forms k*m + j*a^i + l"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(COVERCRAFT_VERSION));

    Flags f;
    app.add_option("--config", f.config_path, "JSON run configuration");
    app.add_option("--save-config", f.save_config, "write the effective configuration to this file");
    app.add_option("--threads", f.threads, "worker threads (default: COVERCRAFT_THREADS or 1)")
        ->check(CLI::PositiveNumber);

    auto* pairs = app.add_subcommand("pairs", "mine (p, q) pairs with ord_q(a) = p");
    add_target_flags(pairs, f);
    pairs->add_option("--out", f.out, "pairs file");

    auto* cover_cmd = app.add_subcommand("cover", "partition pairs and build a verified covering system");
    add_target_flags(cover_cmd, f);
    cover_cmd->add_option("--pairs", f.pairs_in, "pairs file to read");
    cover_cmd->add_option("--triple", f.triples, "restrict to the class j,k,l (repeatable)");
    cover_cmd->add_option("--out", f.out, "covering-system file");

    auto* search_cmd = app.add_subcommand("search", "scan the residue class for surviving primes");
    add_target_flags(search_cmd, f);
    add_window_flags(search_cmd, f);
    search_cmd->add_option("--system", f.system_in, "covering-system file to read");
    search_cmd->add_flag("--check-oracle", f.check_oracle, "compare survivors with the brute-force oracle");
    search_cmd->add_flag("--timing", f.timing, "record wall time in the report");
    search_cmd->add_option("--out", f.out, "JSON-lines report");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force survivors over a small window");
    add_target_flags(oracle_cmd, f);
    add_window_flags(oracle_cmd, f);
    oracle_cmd->add_option("--out", f.out, "oracle file");

    auto* analyze = app.add_subcommand("analyze", "Mertens, pi(x), Brun-type and E(x) diagnostics");
    analyze->add_option("--grid", f.grid, "x values, comma separated")->delimiter(',');
    analyze->add_option("--brun-m", f.brun_m, "multipliers m for the Brun-type sums")->delimiter(',');
    analyze->add_option("--e-D", f.e_D, "truncation bound D for E(x)");
    analyze->add_flag("--no-e", f.no_e, "skip the E(x) column");
    analyze->add_option("--out", f.out, "diagnostics file");

    auto* verify = app.add_subcommand("verify", "re-verify a covering-system, pairs or config file");
    verify->add_option("file", f.verify_target, "file to verify")->required();
    verify->add_option("--seed", f.seed, "seed for sampled checks");
    verify->add_option("--samples", f.samples, "sampled (m, i) divisibility checks");
    verify->add_option("--out", f.out, "write the itemized report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const RunConfig config = effective_config(&app, sub, f);
        if (!f.save_config.empty()) io::write_json(f.save_config, to_json(config));
        if (sub == pairs) return cmd_pairs(config, f);
        if (sub == cover_cmd) return cmd_cover(config, f);
        if (sub == search_cmd) return cmd_search(config, f);
        if (sub == oracle_cmd) return cmd_oracle(config, f);
        if (sub == analyze) return cmd_analyze(config, f);
        return cmd_verify(config, f);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kConfig;
    } catch (const InsufficientPairs& e) {
        std::cerr << e.what() << "\n";
        return kResource;
    } catch (const BudgetExceeded& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kResource;
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerify;
    } catch (const ConflictError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerify;
    } catch (const InvariantViolation& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerify;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
}

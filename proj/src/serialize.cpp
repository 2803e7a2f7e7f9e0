#include "covercraft/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace covercraft::io {

using nt::BigInt;

std::string tool_version() { return COVERCRAFT_VERSION; }

namespace {

json header(const std::string& schema) {
    return json{{"schema", schema}, {"version", kFormatVersion}, {"tool_version", tool_version()}};
}

std::string big(const BigInt& v) { return nt::to_decimal(v); }

BigInt big_from(const json& j, const char* field) {
    if (j.is_string()) {
        try {
            return nt::from_decimal(j.get<std::string>());
        } catch (const DomainError& e) {
            throw ConfigError(std::string("field '") + field + "': " + e.what());
        }
    }
    if (j.is_number_unsigned()) return nt::from_u64(j.get<std::uint64_t>());
    if (j.is_number_integer()) return nt::from_i64(j.get<std::int64_t>());
    throw ConfigError(std::string("field '") + field + "' must be a decimal string");
}

template <class T>
T field(const json& doc, const char* name) {
    if (!doc.contains(name)) throw ConfigError(std::string("missing field '") + name + "'");
    try {
        return doc.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + name + "': " + e.what());
    }
}

std::string rational(const mpq_class& q) { return q.get_str(10); }

mpq_class rational_from(const std::string& text) {
    mpq_class out;
    if (out.set_str(text, 10) != 0) throw ConfigError("malformed rational: " + text);
    out.canonicalize();
    return out;
}

}  // namespace

void check_header(const json& doc, const std::string& schema) {
    if (!doc.is_object()) throw ConfigError("document is not a JSON object");
    const auto name = field<std::string>(doc, "schema");
    if (name != schema) throw ConfigError("expected schema '" + schema + "', found '" + name + "'");
    const auto version = field<std::string>(doc, "version");
    const auto major = version.substr(0, version.find('.'));
    const std::string supported = std::string(kFormatVersion).substr(0, 1);
    if (major != supported)
        throw ConfigError("unsupported " + schema + " major version " + version + " (supported: " + kFormatVersion + ")");
}

json band_to_json(const cover::Band& band) { return json{{"low", rational(band.low)}, {"high", rational(band.high)}}; }

cover::Band band_from_json(const json& j) {
    return cover::Band{rational_from(field<std::string>(j, "low")), rational_from(field<std::string>(j, "high"))};
}

json pairs_document(const cover::TargetConfig& config, const std::vector<MinedBase>& mined) {
    json doc = header(kPairsSchema);
    doc["K"] = config.K;
    doc["M"] = config.M;
    doc["p_max"] = config.p_max;
    doc["factor_budget_bits"] = config.factor_budget_bits;
    json bases = json::array();
    for (const auto& base : mined) {
        json anchors = json::array();
        for (const auto& rec : base.result.anchors) {
            json factors = json::array();
            for (const auto& f : rec.factorization.factors) factors.push_back({big(f.prime), f.exponent});
            json a = {{"p", rec.p},
                      {"status", rec.budget_exceeded ? "budget_exceeded" : "factored"},
                      {"factorization", factors},
                      {"transcript", rec.transcript}};
            if (rec.budget_exceeded) a["unfactored_cofactor"] = big(rec.stuck_cofactor);
            anchors.push_back(std::move(a));
        }
        json pairs = json::array();
        for (const auto& p : base.result.pairs) pairs.push_back({{"p", p.p}, {"q", big(p.q)}});
        bases.push_back({{"a", base.a},
                         {"pairs", pairs},
                         {"skipped_anchors", base.result.skipped()},
                         {"anchors", anchors}});
    }
    doc["bases"] = bases;
    return doc;
}

PairsFile load_pairs(const json& doc) {
    check_header(doc, kPairsSchema);
    PairsFile out;
    out.K = field<int>(doc, "K");
    out.M = field<std::uint64_t>(doc, "M");
    std::string problems;
    for (const auto& base : field<json>(doc, "bases")) {
        const auto a = field<std::uint64_t>(base, "a");
        auto& list = out.pairs_by_base[a];
        std::set<BigInt> seen;
        for (const auto& entry : field<json>(base, "pairs")) {
            cover::PrimePair pair{a, field<std::uint64_t>(entry, "p"), big_from(entry.at("q"), "q")};
            for (const auto& issue : cover::pair_problems(pair, out.M, out.K))
                problems += "\n  a=" + std::to_string(a) + " p=" + std::to_string(pair.p) + ": " + issue;
            if (!seen.insert(pair.q).second)
                problems += "\n  a=" + std::to_string(a) + " p=" + std::to_string(pair.p) + ": q = " +
                            nt::to_decimal(pair.q) + " listed twice (distinctness)";
            list.push_back(std::move(pair));
        }
    }
    if (!problems.empty()) throw VerificationError("pairs file failed re-verification:" + problems);
    return out;
}

json system_document(const cover::CoveringSystem& system) {
    const auto& c = system.config;
    json doc = header(kSystemSchema);
    doc["K"] = c.K;
    doc["M"] = c.M;
    doc["L_N"] = c.L;
    doc["a_range"] = {c.a_min, c.a_max};
    doc["partial"] = system.partial;
    json entries = json::array();
    for (const auto& e : system.entries)
        entries.push_back({{"a", e.a},
                           {"j", e.triple.j},
                           {"k", e.triple.k},
                           {"l", e.triple.l},
                           {"p", e.pair.p},
                           {"q", big(e.pair.q)},
                           {"I", e.I}});
    doc["entries"] = entries;
    doc["W"] = big(system.W);
    doc["b"] = big(system.b);
    return doc;
}

cover::CoveringSystem load_system(const json& doc, bool revalidate, const cover::VerifyOptions& options) {
    check_header(doc, kSystemSchema);
    cover::CoveringSystem system;
    auto& c = system.config;
    c.K = field<int>(doc, "K");
    c.M = field<std::uint64_t>(doc, "M");
    c.L = field<std::vector<std::int64_t>>(doc, "L_N");
    if (doc.contains("a_range")) {
        const auto range = field<std::vector<std::uint64_t>>(doc, "a_range");
        if (range.size() != 2) throw ConfigError("a_range must have two elements");
        c.a_min = range[0];
        c.a_max = range[1];
    } else {
        c.a_min = 2;
        c.a_max = static_cast<std::uint64_t>(std::max(c.K, 2));
    }
    system.partial = doc.value("partial", false);
    for (const auto& e : field<json>(doc, "entries")) {
        cover::CoverEntry entry;
        entry.a = field<std::uint64_t>(e, "a");
        entry.triple = {field<std::int64_t>(e, "j"), field<std::int64_t>(e, "k"), field<std::int64_t>(e, "l")};
        entry.pair = {entry.a, field<std::uint64_t>(e, "p"), big_from(e.at("q"), "q")};
        entry.I = field<int>(e, "I");
        system.entries.push_back(std::move(entry));
    }
    system.W = big_from(field<json>(doc, "W"), "W");
    system.b = big_from(field<json>(doc, "b"), "b");
    if (revalidate) {
        const auto report = cover::verify_covering_system(system, options);
        if (!report.ok()) throw VerificationError("covering system failed verification\n" + report.summary());
    }
    return system;
}

json verification_to_json(const cover::VerificationReport& report) {
    json failures = json::array();
    for (const auto& f : report.failures) failures.push_back({{"check", f.check}, {"detail", f.detail}});
    return json{{"ok", report.ok()},
                {"entries_checked", report.entries_checked},
                {"samples_checked", report.samples_checked},
                {"failures", failures}};
}

json outcome_to_json(const search::FormOutcome& o) {
    json out{{"a", o.a}, {"i", o.i}, {"j", o.triple.j}, {"k", o.triple.k}, {"l", o.triple.l},
             {"value", big(o.value)}, {"status", search::to_string(o.status)}};
    if (o.witness != 0) out["q"] = big(o.witness);
    return out;
}

std::string report_jsonl(const search::SearchReport& report, bool include_timing) {
    std::ostringstream out;
    const auto& c = report.config;
    json head = header(kReportSchema);
    head["record"] = "header";
    head["config"] = {{"K", c.K},
                      {"M", c.M},
                      {"L_N", c.L},
                      {"i_bound", c.exponent_bound == cover::ExponentBound::Inclusive ? "inclusive" : "exclusive"}};
    head["system_digest"] = report.system_digest;
    head["window"] = {{"N", big(report.window.N)}, {"upper", big(report.window.upper)}, {"i_max", report.window.i_max}};
    out << head.dump() << '\n';
    for (const auto& rec : report.candidates) {
        json exceptions = json::array();
        for (const auto& o : rec.exceptions) exceptions.push_back(outcome_to_json(o));
        json line{{"record", "candidate"},
                  {"m", big(rec.m)},
                  {"status", rec.survivor ? "survivor" : "rejected"},
                  {"counts",
                   {{"composite_witnessed", rec.witnessed},
                    {"composite_checked", rec.checked},
                    {"skipped_zero_offset", rec.skipped},
                    {"prime_exception", rec.prime_exceptions},
                    {"unit_or_zero_exception", rec.unit_exceptions}}},
                  {"exceptions", exceptions}};
        out << line.dump() << '\n';
    }
    json tallies = json::array();
    for (const auto& [key, tally] : report.tallies)
        tallies.push_back({{"a", key.a}, {"i", key.i}, {"j", key.triple.j}, {"k", key.triple.k},
                           {"l", key.triple.l}, {"prime", tally.prime}, {"unit_or_zero", tally.unit_or_zero}});
    json survivors = json::array();
    for (const auto& m : report.survivors) survivors.push_back(big(m));
    json trailer{{"record", "trailer"}, {"Q_N", report.Q_N}, {"Q", report.Q}, {"survivors", survivors},
                 {"tallies", tallies}};
    if (include_timing) trailer["wall_seconds"] = report.wall_seconds;
    out << trailer.dump() << '\n';
    return out.str();
}

json oracle_document(const search::SearchWindow& window, const cover::TargetConfig& config,
                     const std::vector<BigInt>& survivors) {
    json doc = header(kOracleSchema);
    doc["K"] = config.K;
    doc["L_N"] = config.L;
    doc["window"] = {{"N", big(window.N)}, {"upper", big(window.upper)}, {"i_max", window.i_max}};
    json list = json::array();
    for (const auto& m : survivors) list.push_back(big(m));
    doc["survivors"] = list;
    doc["count"] = survivors.size();
    return doc;
}

json diagnostics_document(const analytics::DiagnosticsRequest& request,
                          const std::vector<analytics::DiagnosticsRow>& rows) {
    json doc = header(kDiagnosticsSchema);
    doc["margin"] = analytics::kCheckMargin;
    doc["log"] = "natural";
    if (request.e_params) {
        const auto& e = *request.e_params;
        doc["E_params"] = {{"K", e.K}, {"a", e.a}, {"j", e.j}, {"l", e.l}, {"D", e.D}};
    }
    json table = json::array();
    for (const auto& r : rows) {
        json row{{"x", r.x},
                 {"mertens_sum", r.mertens.sum},
                 {"loglog", r.mertens.loglog},
                 {"mertens_ok", r.mertens.ok()},
                 {"pi", r.pi}};
        if (r.pi_bounds) {
            row["pi_lower"] = r.pi_bounds->lower;
            row["pi_upper"] = r.pi_bounds->upper;
            row["pi_bounds_ok"] = r.pi_bounds->ok;
        } else {
            row["pi_lower"] = nullptr;
            row["pi_upper"] = nullptr;
            row["pi_bounds_ok"] = nullptr;
        }
        json brun = json::array();
        for (const auto& b : r.brun) {
            json decades = json::array();
            for (const auto& d : b.decades) decades.push_back({{"from", d.from}, {"to", d.to}, {"increment", d.increment}});
            brun.push_back({{"m", b.m}, {"sum", b.sum}, {"decades", decades}});
        }
        row["brun"] = brun;
        if (r.e_sum) {
            row["E"] = r.e_sum->value;
            row["E_ratio"] = r.e_sum->ratio;
        } else {
            row["E"] = nullptr;
            row["E_ratio"] = nullptr;
        }
        table.push_back(std::move(row));
    }
    doc["rows"] = table;
    return doc;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

}  // namespace covercraft::io

#include "covercraft/run_config.hpp"

namespace covercraft {

using io::json;

const char* to_string(OffsetPreset preset) {
    switch (preset) {
        case OffsetPreset::Explicit: return "explicit";
        case OffsetPreset::Multiples: return "multiples";
        case OffsetPreset::Factorial: return "factorial";
    }
    return "explicit";
}

OffsetPreset offset_preset_from(const std::string& name) {
    if (name == "explicit") return OffsetPreset::Explicit;
    if (name == "multiples" || name == "remark1") return OffsetPreset::Multiples;
    if (name == "factorial" || name == "remark1-factorial") return OffsetPreset::Factorial;
    throw ConfigError("unknown offsets preset '" + name + "' (expected explicit, multiples or factorial)");
}

void RunConfig::resolve_offsets() {
    switch (offsets) {
        case OffsetPreset::Explicit: break;
        case OffsetPreset::Multiples: target.L = cover::multiples_offsets(target.K, offset_prime); break;
        case OffsetPreset::Factorial: target.L = cover::factorial_offsets(target.K); break;
    }
}

std::vector<std::string> RunConfig::problems() const {
    std::vector<std::string> out = target.problems();
    if (N < 2) out.push_back("N must be >= 2");
    if (upper && *upper <= N) out.push_back("upper must exceed N");
    const nt::BigInt bound = nt::BigInt(target.K) * N;
    for (std::int64_t l : target.L)
        if (abs(nt::from_i64(l)) > bound)
            out.push_back("|l| = " + std::to_string(l) + " exceeds K*N = " + nt::to_decimal(bound));
    if (samples == 0) out.push_back("samples must be >= 1");
    if (threads && *threads == 0) out.push_back("threads must be >= 1");
    for (std::uint64_t x : grid)
        if (x < 2) out.push_back("grid points must be >= 2");
    for (std::uint64_t m : brun_m)
        if (m < 2) out.push_back("brun m values must be >= 2");
    if (e_params.D < 2 || e_params.D > analytics::kMaxTruncation)
        out.push_back("E truncation D must lie in [2, " + std::to_string(analytics::kMaxTruncation) + "]");
    if (e_params.a < 1) out.push_back("E base a must be >= 1");
    return out;
}

void RunConfig::validate() const {
    const auto issues = problems();
    if (issues.empty()) return;
    std::string message = "invalid configuration:";
    for (const auto& issue : issues) message += "\n  - " + issue;
    throw ConfigError(message);
}

RunConfig default_run_config() {
    RunConfig config;
    config.target.K = 2;
    config.target.a_min = 2;
    config.target.a_max = 2;
    config.resolve_offsets();
    return config;
}

json to_json(const RunConfig& c) {
    const auto& t = c.target;
    json doc{{"schema", io::kConfigSchema}, {"version", io::kFormatVersion}, {"tool_version", io::tool_version()}};
    doc["K"] = t.K;
    doc["M"] = t.M;
    doc["L_N"] = t.L;
    doc["offsets"] = to_string(c.offsets);
    doc["offset_prime"] = c.offset_prime ? json(*c.offset_prime) : json(nullptr);
    doc["a_range"] = {t.a_min, t.a_max};
    doc["p_max"] = t.p_max;
    doc["factor_budget_bits"] = t.factor_budget_bits;
    doc["band"] = t.band ? io::band_to_json(*t.band) : json(nullptr);
    doc["min_pairs_per_class"] = t.min_pairs_per_class;
    doc["largest_q_per_anchor"] = t.largest_q_per_anchor;
    doc["A"] = t.A;
    doc["i_bound"] = t.exponent_bound == cover::ExponentBound::Inclusive ? "inclusive" : "exclusive";
    doc["log_base"] = "natural";
    doc["N"] = nt::to_decimal(c.N);
    doc["upper"] = c.upper ? json(nt::to_decimal(*c.upper)) : json(nullptr);
    doc["seed"] = c.seed;
    doc["samples"] = c.samples;
    doc["threads"] = c.threads ? json(*c.threads) : json(nullptr);
    doc["analyze"] = {{"grid", c.grid},
                      {"brun_m", c.brun_m},
                      {"E", {{"K", c.e_params.K}, {"a", c.e_params.a}, {"j", c.e_params.j},
                             {"l", c.e_params.l}, {"D", c.e_params.D}}}};
    doc["outputs"] = {{"pairs", c.outputs.pairs},
                      {"cover", c.outputs.cover},
                      {"report", c.outputs.report},
                      {"oracle", c.outputs.oracle},
                      {"diagnostics", c.outputs.diagnostics}};
    return doc;
}

namespace {

template <class T>
void read(const json& doc, const char* name, T& target) {
    if (!doc.contains(name) || doc.at(name).is_null()) return;
    try {
        target = doc.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + name + "': " + e.what());
    }
}

nt::BigInt read_big(const json& value, const char* name) {
    try {
        if (value.is_string()) return nt::from_decimal(value.get<std::string>());
        if (value.is_number_unsigned()) return nt::from_u64(value.get<std::uint64_t>());
        if (value.is_number_integer()) return nt::from_i64(value.get<std::int64_t>());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config field '") + name + "': " + e.what());
    }
    throw ConfigError(std::string("config field '") + name + "' must be an integer or decimal string");
}

}  // namespace

RunConfig run_config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (doc.contains("schema")) io::check_header(doc, io::kConfigSchema);
    RunConfig c;
    auto& t = c.target;
    read(doc, "K", t.K);
    read(doc, "M", t.M);
    t.a_min = 2;
    t.a_max = static_cast<std::uint64_t>(std::max(t.K, 2));
    if (doc.contains("a_range") && !doc["a_range"].is_null()) {
        std::vector<std::uint64_t> range;
        read(doc, "a_range", range);
        if (range.size() != 2) throw ConfigError("config field 'a_range' must be [lo, hi]");
        t.a_min = range[0];
        t.a_max = range[1];
    }
    std::string preset = doc.contains("L_N") && !doc.contains("offsets") ? "explicit" : "multiples";
    read(doc, "offsets", preset);
    c.offsets = offset_preset_from(preset);
    if (doc.contains("offset_prime") && !doc["offset_prime"].is_null()) {
        std::uint64_t prime = 0;
        read(doc, "offset_prime", prime);
        c.offset_prime = prime;
    }
    if (c.offsets == OffsetPreset::Explicit) read(doc, "L_N", t.L);
    else if (t.K >= 2) c.resolve_offsets();
    read(doc, "p_max", t.p_max);
    read(doc, "factor_budget_bits", t.factor_budget_bits);
    if (doc.contains("band") && !doc["band"].is_null()) t.band = io::band_from_json(doc["band"]);
    read(doc, "min_pairs_per_class", t.min_pairs_per_class);
    read(doc, "largest_q_per_anchor", t.largest_q_per_anchor);
    read(doc, "A", t.A);
    std::string bound = "inclusive";
    read(doc, "i_bound", bound);
    if (bound == "inclusive") t.exponent_bound = cover::ExponentBound::Inclusive;
    else if (bound == "exclusive") t.exponent_bound = cover::ExponentBound::Exclusive;
    else throw ConfigError("config field 'i_bound' must be 'inclusive' or 'exclusive'");
    if (doc.contains("log_base") && doc["log_base"] != "natural")
        throw ConfigError("config field 'log_base' only supports 'natural'");
    if (doc.contains("N")) c.N = read_big(doc["N"], "N");
    if (doc.contains("upper") && !doc["upper"].is_null()) c.upper = read_big(doc["upper"], "upper");
    read(doc, "seed", c.seed);
    read(doc, "samples", c.samples);
    if (doc.contains("threads") && !doc["threads"].is_null()) {
        unsigned threads = 0;
        read(doc, "threads", threads);
        c.threads = threads;
    }
    if (doc.contains("analyze")) {
        const json& a = doc["analyze"];
        read(a, "grid", c.grid);
        read(a, "brun_m", c.brun_m);
        if (a.contains("E")) {
            const json& e = a["E"];
            read(e, "K", c.e_params.K);
            read(e, "a", c.e_params.a);
            read(e, "j", c.e_params.j);
            read(e, "l", c.e_params.l);
            read(e, "D", c.e_params.D);
        }
    }
    if (doc.contains("outputs")) {
        const json& o = doc["outputs"];
        read(o, "pairs", c.outputs.pairs);
        read(o, "cover", c.outputs.cover);
        read(o, "report", c.outputs.report);
        read(o, "oracle", c.outputs.oracle);
        read(o, "diagnostics", c.outputs.diagnostics);
    }
    return c;
}

bool same_config(const RunConfig& x, const RunConfig& y) { return to_json(x) == to_json(y); }

}  // namespace covercraft

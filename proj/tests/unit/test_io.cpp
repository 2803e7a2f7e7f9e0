#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "covercraft/errors.hpp"
#include "covercraft/run_config.hpp"
#include "covercraft/serialize.hpp"

using namespace covercraft;
using cover::CoverEntry;
using cover::CoveringSystem;
using cover::TargetConfig;
using io::json;

namespace {

TargetConfig desk_config() {
    TargetConfig c;
    c.K = 2;
    c.L = {5, 7};
    c.M = 2;
    return c;
}

CoveringSystem mined_system() {
    const TargetConfig config = desk_config();
    const auto mined = cover::find_prime_pairs(2, config.M, 127, config.K);
    std::map<std::uint64_t, std::vector<cover::PrimePair>> by_base{{2, cover::select_distinct(mined.pairs, true)}};
    const auto part = cover::partition_pairs(by_base, config.triples(), config.effective_band());
    return cover::build_covering_system(part, config);
}

json mined_pairs_doc() {
    TargetConfig config = desk_config();
    config.p_max = 127;
    return io::pairs_document(config, {{2, cover::find_prime_pairs(2, config.M, 127, config.K)}});
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("check_header accepts minor bumps and rejects the rest") {
    json doc{{"schema", "covercraft.cover"}, {"version", "1.0"}, {"tool_version", "x"}};
    CHECK_NOTHROW(io::check_header(doc, io::kSystemSchema));
    doc["version"] = "1.9";
    CHECK_NOTHROW(io::check_header(doc, io::kSystemSchema));
    doc["version"] = "2.0";
    CHECK_THROWS_AS(io::check_header(doc, io::kSystemSchema), ConfigError);
    doc["version"] = "1.0";
    CHECK_THROWS_AS(io::check_header(doc, io::kPairsSchema), ConfigError);
    CHECK_THROWS_AS(io::check_header(json::array(), io::kPairsSchema), ConfigError);
    CHECK_THROWS_AS(io::check_header(json{{"schema", "covercraft.cover"}}, io::kSystemSchema), ConfigError);
}

TEST_CASE("pairs round trip") {
    const json doc = mined_pairs_doc();
    const auto mined = cover::find_prime_pairs(2, 2, 127, 2);
    const auto file = io::load_pairs(json::parse(doc.dump()));
    CHECK(file.M == 2);
    CHECK(file.K == 2);
    REQUIRE(file.pairs_by_base.count(2) == 1);
    CHECK(file.pairs_by_base.at(2) == mined.pairs);
}

TEST_CASE("big integers are written as decimal strings") {
    const json doc = io::system_document(mined_system());
    CHECK(doc.at("W").is_string());
    CHECK(doc.at("b").is_string());
    CHECK(doc.at("schema") == io::kSystemSchema);
    CHECK(doc.contains("tool_version"));
}

TEST_CASE("load_pairs rejects tampered pairs") {
    json doc = mined_pairs_doc();
    auto& pairs = doc["bases"][0]["pairs"];
    REQUIRE(pairs.size() >= 2);

    SUBCASE("wrong q") {
        pairs[0]["q"] = "15";
        CHECK_THROWS_AS(io::load_pairs(doc), VerificationError);
    }
    SUBCASE("q listed twice") {
        pairs.push_back(pairs[0]);
        CHECK_THROWS_AS(io::load_pairs(doc), VerificationError);
    }
    SUBCASE("unknown major version") {
        doc["version"] = "7.0";
        CHECK_THROWS_AS(io::load_pairs(doc), ConfigError);
    }
}

TEST_CASE("covering system round trip") {
    const auto system = mined_system();
    const json doc = io::system_document(system);
    const auto loaded = io::load_system(json::parse(doc.dump()));
    CHECK(loaded.entries == system.entries);
    CHECK(loaded.W == system.W);
    CHECK(loaded.b == system.b);
    CHECK(loaded.partial == system.partial);
    CHECK(loaded.config.L == system.config.L);
    CHECK(loaded.config.K == system.config.K);
    CHECK(io::system_document(loaded).dump() == doc.dump());
    CHECK(cover::system_digest(loaded) == cover::system_digest(system));
}

TEST_CASE("load_system revalidates") {
    json doc = io::system_document(mined_system());
    doc["b"] = nt::BigInt(nt::BigInt(doc["b"].get<std::string>()) + 1).get_str();
    CHECK_THROWS_AS(io::load_system(doc), VerificationError);
    CHECK_NOTHROW(io::load_system(doc, false));
}

TEST_CASE("search report lines") {
    const auto system = mined_system();
    const auto window = search::make_window(5000, 2, cover::ExponentBound::Inclusive, nt::BigInt(200'000));
    const auto report = search::run_experiment(system.config, window, system, {2});
    const std::string text = io::report_jsonl(report);
    CHECK(text == io::report_jsonl(search::run_experiment(system.config, window, system, {1})));

    const auto rows = lines(text);
    REQUIRE(rows.size() == report.candidates.size() + 2);
    const auto head = json::parse(rows.front());
    CHECK(head.at("schema") == io::kReportSchema);
    CHECK(head.at("record") == "header");
    const auto tail = json::parse(rows.back());
    CHECK(tail.at("record") == "trailer");
    CHECK(tail.at("Q_N") == report.Q_N);
    CHECK(!tail.contains("wall_seconds"));
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) CHECK(json::parse(rows[i]).at("m").is_string());

    CHECK(json::parse(lines(io::report_jsonl(report, true)).back()).contains("wall_seconds"));
}

TEST_CASE("run config round trip") {
    auto config = default_run_config();
    config.target.K = 3;
    config.offsets = OffsetPreset::Multiples;
    config.offset_prime = 11;
    config.resolve_offsets();
    config.N = nt::BigInt("123456789012345678901234567890");
    config.upper = config.N + 1000;
    config.samples = 77;
    config.threads = 3;
    config.grid = {2, 59, 1000};
    config.outputs.cover = "c.json";
    config.validate();

    const json doc = to_json(config);
    CHECK(doc.at("schema") == io::kConfigSchema);
    CHECK(doc.at("N").is_string());
    const auto loaded = run_config_from_json(json::parse(doc.dump()));
    CHECK(same_config(loaded, config));
    CHECK(loaded.target.L == config.target.L);
    CHECK(loaded.N == config.N);
}

TEST_CASE("partial run config falls back to defaults") {
    const auto loaded = run_config_from_json(json{{"K", 2}, {"L_N", {5, 7}}, {"N", "5000"}});
    CHECK(loaded.target.L == std::vector<std::int64_t>{5, 7});
    CHECK(loaded.offsets == OffsetPreset::Explicit);
    CHECK(loaded.samples == default_run_config().samples);
    CHECK_NOTHROW(loaded.validate());
}

TEST_CASE("run config rejects bad documents") {
    json doc = to_json(default_run_config());
    doc["version"] = "3.1";
    CHECK_THROWS_AS(run_config_from_json(doc), ConfigError);

    auto config = default_run_config();
    config.N = 10;
    config.target.L = {5, 100};
    config.offsets = OffsetPreset::Explicit;
    CHECK(!config.problems().empty());
    CHECK_THROWS_AS(config.validate(), ConfigError);

    config = default_run_config();
    config.samples = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);

    CHECK_THROWS_AS(offset_preset_from("fibonacci"), ConfigError);
}

TEST_CASE("diagnostics document") {
    analytics::DiagnosticsRequest request;
    request.grid = {2, 100};
    request.e_params = analytics::EParams{2, 2, 1, 1, 1000};
    const json doc = io::diagnostics_document(request, analytics::run_diagnostics(request));
    CHECK(doc.at("schema") == io::kDiagnosticsSchema);
    CHECK(doc.dump() == io::diagnostics_document(request, analytics::run_diagnostics(request)).dump());
}

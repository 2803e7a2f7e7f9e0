#pragma once

// Versioned JSON / JSON-lines persistence. Big integers are decimal strings.
// Every document carries {"schema", "version", "tool_version"}; loaders reject
// a different schema name or an unknown major version.

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "covercraft/analytics.hpp"
#include "covercraft/cover.hpp"
#include "covercraft/search.hpp"

namespace covercraft::io {

using json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1.0";
inline constexpr const char* kPairsSchema = "covercraft.pairs";
inline constexpr const char* kSystemSchema = "covercraft.cover";
inline constexpr const char* kReportSchema = "covercraft.report";
inline constexpr const char* kOracleSchema = "covercraft.oracle";
inline constexpr const char* kDiagnosticsSchema = "covercraft.diagnostics";
inline constexpr const char* kConfigSchema = "covercraft.config";

std::string tool_version();

/// Throws ConfigError if the document is not `schema` with a supported major version.
void check_header(const json& doc, const std::string& schema);

json band_to_json(const cover::Band& band);
cover::Band band_from_json(const json& j);

// --- pairs ------------------------------------------------------------------

struct MinedBase {
    std::uint64_t a = 2;
    cover::MiningResult result;
};

json pairs_document(const cover::TargetConfig& config, const std::vector<MinedBase>& mined);

struct PairsFile {
    std::uint64_t M = 1;
    int K = 2;
    std::map<std::uint64_t, std::vector<cover::PrimePair>> pairs_by_base;
};

/// Parses a pairs document and re-checks every pair against (M, K).
/// Throws ConfigError on schema problems, VerificationError on a bad pair.
PairsFile load_pairs(const json& doc);

// --- covering system ----------------------------------------------------------

json system_document(const cover::CoveringSystem& system);

/// Parses a covering-system document. With revalidate, runs
/// verify_covering_system and throws VerificationError carrying the itemized
/// report when any check fails.
cover::CoveringSystem load_system(const json& doc, bool revalidate = true,
                                  const cover::VerifyOptions& options = {});

json verification_to_json(const cover::VerificationReport& report);

// --- search ------------------------------------------------------------------

/// Header line, one line per candidate, trailer. wall time only when asked,
/// so repeated runs stay byte-identical by default.
std::string report_jsonl(const search::SearchReport& report, bool include_timing = false);

json outcome_to_json(const search::FormOutcome& outcome);

json oracle_document(const search::SearchWindow& window, const cover::TargetConfig& config,
                     const std::vector<nt::BigInt>& survivors);

// --- analytics ----------------------------------------------------------------

json diagnostics_document(const analytics::DiagnosticsRequest& request,
                          const std::vector<analytics::DiagnosticsRow>& rows);

// --- files ---------------------------------------------------------------------

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& doc);

}  // namespace covercraft::io

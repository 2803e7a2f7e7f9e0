#pragma once

// RunConfig: everything a CLI run needs, loadable from and saved to a
// human-editable JSON file.

#include <optional>
#include <string>
#include <vector>

#include "covercraft/analytics.hpp"
#include "covercraft/cover.hpp"
#include "covercraft/serialize.hpp"

namespace covercraft {

enum class OffsetPreset { Explicit, Multiples, Factorial };

const char* to_string(OffsetPreset preset);
OffsetPreset offset_preset_from(const std::string& name);

struct OutputPaths {
    std::string pairs = "pairs.json";
    std::string cover = "cover.json";
    std::string report = "report.jsonl";
    std::string oracle = "oracle.json";
    std::string diagnostics = "diagnostics.json";

    friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct RunConfig {
    cover::TargetConfig target;
    OffsetPreset offsets = OffsetPreset::Multiples;
    std::optional<std::uint64_t> offset_prime;  // Multiples preset only

    nt::BigInt N = 5000;
    std::optional<nt::BigInt> upper;

    std::uint64_t seed = 1;
    std::size_t samples = 10'000;
    std::optional<unsigned> threads;

    std::vector<std::uint64_t> grid = {2, 10, 100, 1000, 10'000, 100'000};
    std::vector<std::uint64_t> brun_m = {2, 4};
    analytics::EParams e_params;

    OutputPaths outputs;

    /// Fills target.L from the preset (no-op for Explicit).
    void resolve_offsets();
    /// Cross-field problems, including TargetConfig's and |l| <= K N.
    std::vector<std::string> problems() const;
    void validate() const;
};

/// Defaults: K = 2, a in [2, K], L_N from the multiples preset.
RunConfig default_run_config();

io::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const io::json& doc);

bool same_config(const RunConfig& x, const RunConfig& y);

}  // namespace covercraft

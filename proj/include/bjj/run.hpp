#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bjj/config.hpp"

namespace bjj {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct RunOutcome {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
    /// Pretty-printed metadata written next to the CSV.
    std::string metadata_json;
};

/// FNV-1a 64-bit hash of the canonical config text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// CSV text for each scheme; deterministic for a given config.
std::string global_csv(const RunConfig& config, const std::vector<GlobalRow>& rows, std::string_view schema);
std::string local_csv(const RunConfig& config, const std::vector<LocalRow>& rows);
std::string sweep_csv(const RunConfig& config, const SweepResult& result, const std::vector<std::string>& notes);

/// Runs the configured scheme, writing its CSV file(s) and metadata.json into
/// config.output. Module errors propagate as exceptions.
RunOutcome run(const RunConfig& config);

/// Machine-readable error document for the CLI.
std::string error_json(std::string_view kind, const std::vector<std::string>& messages);

}  // namespace bjj

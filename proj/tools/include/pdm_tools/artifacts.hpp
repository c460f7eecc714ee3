#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdm_tools/config.hpp"
#include "pdm_tools/experiments.hpp"

namespace pdm::tools {

/// First line of results.csv. Bump the version when columns change.
inline constexpr const char* kResultsHeader = "experiment,job,series,s,x,y";
inline constexpr const char* kResultsSchema = "# pdm-results v1";

/// Column documentation shown by --help.
std::string results_columns_help();

/// Writes results.csv, fits.json, plots/*.dat and manifest.json (written
/// last, with a SHA-256 hash of every other file). Returns the files written.
std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& dir, const ExperimentConfig& config,
                                                   const std::vector<JobResult>& results);

std::string sha256_hex(const std::filesystem::path& file);

/// Verifies the manifest and its hashes and prints one PASS/FAIL line per
/// assertion, with the measured value. Returns 0 iff everything passed.
/// Throws on a missing or corrupt manifest.
int report(const std::filesystem::path& dir, std::ostream& os);

}  // namespace pdm::tools

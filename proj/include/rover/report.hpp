#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rover/scenario.hpp"

namespace rover {

/// JSON document for one run; read back by summary_from_json.
std::string summary_to_json(const RunSummary& s);
RunSummary summary_from_json(const std::string& text);

/// Per-run entries plus a table that lines up test cases A/B/C of each path.
/// Requires at least one summary.
std::string make_report(const std::vector<RunSummary>& summaries);

/// Collects `summary.json` from `dir` and its immediate subdirectories, sorted by run name.
std::vector<RunSummary> collect_summaries(const std::filesystem::path& dir);

} // namespace rover

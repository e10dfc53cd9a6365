#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rover/scenario.hpp"

namespace rover {

/// Reads a JSON scenario file. Relative grid paths resolve against the file's directory.
/// Missing file or schema violations throw ConfigError (key path in key()),
/// malformed JSON throws ParseError with the line number.
ScenarioConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Same as parse_config for an in-memory document.
ScenarioConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {},
                                 const std::filesystem::path& base_dir = {});

/// Full document for `cfg`; parse_config_text(write_config(c)) == c.
std::string write_config(const ScenarioConfig& cfg);

/// 16 hex digits of FNV-1a over the canonical document.
std::string config_hash(const ScenarioConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace rover

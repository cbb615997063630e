#pragma once

#include <string>

#include "opgt/sim.hpp"

namespace opgt {

inline constexpr int kConfigVersion = 1;

// Parses a versioned JSON scenario document. Unknown keys are rejected with
// the full key path; all omitted keys fall back to defaults (or to the
// builtin named by "base"). Throws ConfigError.
ScenarioConfig parse_scenario_config(const std::string& json_text);

// Full round-trippable document, every key explicit.
std::string scenario_config_to_json(const ScenarioConfig& cfg);

// FNV-1a 64 over the canonical JSON document, hex encoded.
std::string config_fingerprint(const ScenarioConfig& cfg);

}  // namespace opgt

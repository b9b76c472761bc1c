#pragma once

// JSON scenario documents (schema version 1). See docs/scenario-schema.md.

#include <filesystem>
#include <string_view>

#include "json.hpp"

#include "rto/domain.hpp"

namespace rto {

/// Parses and validates a scenario document. Missing optional fields take
/// their defaults. Throws ValidationError naming the offending field path;
/// syntax errors carry the path "<document>".
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical document for a scenario; parse_scenario(to_json(s)) == s.
nlohmann::json scenario_to_json(const Scenario& scenario);

const char* to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view text);

}  // namespace rto

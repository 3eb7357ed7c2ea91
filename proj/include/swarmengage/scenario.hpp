#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>

#include "swarmengage/simulator.hpp"

namespace swarmengage {

/// Reads a scenario document. Throws ConfigError on I/O or parse failure.
nlohmann::json load_scenario_file(const std::filesystem::path& path);

/// Fills every default explicitly (option, tolerances, horizon, step limit,
/// seed) so the result can be fed back in and behave identically. Unknown
/// keys are rejected.
nlohmann::json resolve_scenario(const nlohmann::json& doc);

/// Builds the typed config from a document (resolved or not).
ScenarioConfig parse_scenario(const nlohmann::json& doc);

/// Command-line overrides applied on top of a document.
struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<PhaseOption> option;
};

nlohmann::json apply_overrides(nlohmann::json doc, const ScenarioOverrides& o);

}  // namespace swarmengage

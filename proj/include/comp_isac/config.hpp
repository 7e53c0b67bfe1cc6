#pragma once

#include <filesystem>
#include <string>

#include "comp_isac/channel.hpp"

namespace comp_isac {

/**
 * @brief Parse a scenario from JSON text.
 *
 * Flat object; any key left out takes its value from ScenarioConfig::defaults(L).
 * Per-cell keys accept a scalar (broadcast) or a list of L numbers; gain
 * matrices are lists of L rows. Unknown keys are rejected. Errors are
 * ConfigError carrying the offending key.
 */
ScenarioConfig parse_scenario(const std::string& text);

ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace comp_isac

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "irsmc/experiment.hpp"

namespace irsmc {

nlohmann::json to_json(const OptimizerConfig& cfg);
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
OptimizerConfig optimizer_config_from_json(const nlohmann::json& j, OptimizerConfig base = {});
ScenarioConfig scenario_config_from_json(const nlohmann::json& j, ScenarioConfig base);

ScenarioConfig load_scenario_config(const std::filesystem::path& path, const ScenarioConfig& base);

/// "key=value" lines with nested keys joined by '.', in a fixed order.
std::vector<std::string> flatten_config(const ScenarioConfig& cfg);

}  // namespace irsmc

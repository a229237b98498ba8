#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trajadv/dynamics.hpp"
#include "trajadv/sim.hpp"

namespace trajadv {

inline constexpr int kSchemaVersion = 1;

// YAML model definition (see models/*.yaml). Throws ConfigError with a
// "<source>:<line>:<column>:" prefix on parse or validation failure.
RobotModel load_model(const std::filesystem::path& path);
RobotModel parse_model(const std::string& yaml_text, const std::string& source_name = "<model>");

// YAML scenario file. `overrides` are "dotted.key=value" strings applied to
// the document before decoding; values are parsed as YAML. Unknown keys are
// rejected. Relative model file paths resolve against the scenario's
// directory.
ScenarioConfig load_scenario(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});
ScenarioConfig parse_scenario(const std::string& yaml_text,
                              const std::filesystem::path& base_dir,
                              const std::vector<std::string>& overrides = {},
                              const std::string& source_name = "<scenario>");

}  // namespace trajadv

#pragma once

#include <stdexcept>
#include <string>

#include "nsplast/integrator.hpp"

namespace nsplast {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses and validates a JSON run configuration. Unknown keys are rejected
/// with their path; all cross-field constraints (regime/moduli consistency,
/// stability bound, thermal parameters) are checked here, so a returned
/// config is ready to simulate. Throws ConfigError.
SimConfig parse_config(const std::string& json_text);

/// Canonical echo with every default expanded; parse_config(config_to_json(c))
/// reproduces c exactly.
std::string config_to_json(const SimConfig& config);

}  // namespace nsplast

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lwq/harness.hpp"

namespace lwq {

// Flat `key = value` text, one entry per line, `#` starts a comment.
// Keys are dotted (plant.rho, gains.kvp.x, ...). Unknown or repeated keys,
// malformed values and out-of-range fields raise ConfigError. Missing keys
// keep their defaults.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every accepted key, in documentation order.
std::vector<std::string> config_keys();

/// Serializes every key with 17 significant digits. Angles are written in
/// degrees, so they round-trip to within one ulp of the conversion.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace lwq

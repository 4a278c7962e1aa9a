#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace gyro::cli {

/// Parsed command line plus the schema-checked configuration document.
struct RunConfig {
  std::string subcommand;
  nlohmann::json config;
  std::filesystem::path out_dir;
  /// Scan worker pool size, 0 for the OpenMP default.
  int workers = 0;
  /// JSON indentation, -1 for compact output.
  int json_indent = 2;
};

/// The configuration schema compiled into the binary.
const nlohmann::json& config_schema();

/// Every violation of the supported JSON Schema subset, as "path: message"; empty when valid.
/// Keywords: type, const, enum, properties, required, additionalProperties (false), items,
/// minItems, maxItems, minimum, maximum, oneOf and local $ref.
std::vector<std::string> schema_violations(const nlohmann::json& doc, const nlohmann::json& schema);

/// Reads a JSON file ("-" for stdin), throws config errors on parse failure.
nlohmann::json read_json(const std::string& path);

/// Schema validation, subcommand agreement and the per-subcommand required keys.
void validate_config(const std::string& subcommand, const nlohmann::json& config);

}  // namespace gyro::cli

#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "config.hpp"

namespace gyro::cli {

/// Writes manifest.json on construction and stamps its hash into every later file.
class Output {
 public:
  Output(std::filesystem::path dir, nlohmann::json manifest, int indent = 2);

  const std::string& manifest_hash() const { return hash_; }
  /// Adds schema_version and manifest_sha256 to the top-level object.
  void write_json(const std::string& name, nlohmann::json j);
  /// Text outputs (CSV, triplets) start with "# manifest_sha256 <hash>".
  void write_text(const std::string& name, const std::string& body);
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  int indent_ = 2;
  std::vector<std::string> files_;
};

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

/// Configuration with defaults filled in, as recorded in the manifest.
nlohmann::json resolve_config(const std::string& subcommand, const nlohmann::json& config);

/// Runs a validated subcommand; returns a short JSON summary for stdout.
nlohmann::json run_command(const RunConfig& run);

/// Subcommand names in help order.
const std::vector<std::string>& subcommands();

}  // namespace gyro::cli

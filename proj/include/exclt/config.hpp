#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "exclt/clt_harness.hpp"

namespace exclt {

/// Aggregated schema violations; each entry starts with its JSON key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  [[nodiscard]] const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ValidatedConfig {
  ExperimentConfig experiment;
  /// Every resolved value, re-parseable into the same ValidatedConfig.
  nlohmann::json normalized;
  /// Optional increasing window sequence (sides per window).
  std::vector<std::vector<double>> window_growth;
  /// Truncation tolerance used to resolve the shot-noise buffer.
  double truncation_tol = ShotNoiseModel::kDefaultTruncation;
};

struct ConfigResult {
  std::optional<ValidatedConfig> config;
  std::vector<std::string> errors;
  [[nodiscard]] bool ok() const noexcept { return config.has_value(); }
};

/// Checks the whole document, collecting every violation, and resolves all
/// defaults (quadrature tolerances, shot-noise buffer, subwindow edge).
ConfigResult validate_config(const nlohmann::json& doc);

/// Parses a file (JSON); unreadable or malformed files yield errors.
ConfigResult validate_config_file(const std::filesystem::path& path);

/// As validate_config, throwing ConfigError on failure.
ValidatedConfig load_config(const nlohmann::json& doc);

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> threads;
  std::optional<double> edge;
  /// Window sides; a single value means a cube of that side.
  std::optional<std::vector<double>> grid;
  std::optional<std::vector<double>> thresholds;
};

/// Writes the overrides into the document before validation, so they are
/// checked against the same schema as file values.
void apply_overrides(nlohmann::json& doc, const ConfigOverrides& overrides);

/// FNV-1a 64-bit hash of the normalized document's canonical dump.
std::uint64_t config_hash(const nlohmann::json& normalized);

/// Reproduction manifest: config hash, normalized config, seed, versions.
nlohmann::json make_manifest(const ValidatedConfig& cfg, const std::string& command);

}  // namespace exclt

#pragma once

// JSON run configuration: parsing into core types with key-path diagnostics.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyext/extremes.hpp"

namespace levyext::app {

/// Invalid configuration; `key` is the dotted path, `line` the 1-based line in
/// the source file when it can be located.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message, std::optional<int> line = {});
  const std::string& key() const { return key_; }
  std::optional<int> line() const { return line_; }

 private:
  std::string key_;
  std::optional<int> line_;
};

struct GeometryOptions {
  std::vector<std::int64_t> k_list = {100, 1000, 10000};
  double count_constant = 5.0;  // |ratio - 1| <= c k^{-1/2}
  bool dump_grid = false;
};

struct RunConfig {
  nlohmann::json raw;  // config after overrides; echoed into results
  ExperimentConfig experiment;
  GeometryOptions geometry;
  bool perturbed = false;
  bool anticluster = false;
  bool ergodic = false;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicates;
  /// Off for `validate`, which reports cross-field problems itself.
  bool cross_checks = true;
};

/// Parses JSON text. Throws ConfigError for syntax errors (with line) and for
/// missing or ill-typed keys.
nlohmann::json parse_json(const std::string& text);

/// Builds a RunConfig from parsed JSON; `text` is only used to locate lines
/// for diagnostics.
RunConfig build_config(nlohmann::json raw, const std::string& text, const Overrides& overrides);

RunConfig load_config(const std::string& path, const Overrides& overrides);

std::string read_file(const std::string& path);

/// 1-based line of a dotted key path in the config text, if present.
std::optional<int> locate_key(const std::string& text, const std::string& path);

}  // namespace levyext::app

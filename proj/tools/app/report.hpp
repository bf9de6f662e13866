#pragma once

// Serialization of results, CSV tables, run manifests and atomic file output.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "levyext/extremes.hpp"
#include "levyext/geometry.hpp"

namespace levyext::app {

nlohmann::json to_json(const ExperimentResult& result);
nlohmann::json to_json(const Verdict& verdict);
nlohmann::json to_json(const CountLimitRow& row);

/// Flat per-level table for tail and ladder experiments.
std::string results_csv(const ExperimentResult& result);
std::string table_csv(const ExperimentResult& result);

/// SHA-256 hex digest of the canonical (sorted-key, compact) JSON dump.
std::string config_digest(const nlohmann::json& config);

/// Writes via a temporary sibling and rename so readers never see partial files.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string utc_timestamp();

/// Collects outputs of one run and writes the manifest last.
class RunWriter {
 public:
  RunWriter(std::filesystem::path out_dir, std::string subcommand, const nlohmann::json& config,
            std::uint64_t seed);

  std::filesystem::path write(const std::string& name, const std::string& content);
  std::filesystem::path write_json(const std::string& name, const nlohmann::json& payload);
  void finish(int exit_status);

 private:
  std::filesystem::path dir_;
  std::string subcommand_;
  std::string digest_;
  std::uint64_t seed_;
  std::string started_;
  std::vector<std::string> outputs_;
};

}  // namespace levyext::app

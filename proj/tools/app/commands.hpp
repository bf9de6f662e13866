#pragma once

// Subcommands of the levyext tool. Each returns the process exit status:
// 0 all verdicts pass, 1 some verdict failed, 2 invalid configuration.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace levyext::app {

inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFailure = 1;
inline constexpr int kExitConfigError = 2;

struct CommandContext {
  std::string config_path;
  Overrides overrides;
  std::filesystem::path out_dir = "results";
};

const std::vector<std::string>& experiment_subcommands();

int run_subcommand(const std::string& name, const CommandContext& ctx, std::ostream& out,
                   std::ostream& err);

struct ValidationItem {
  enum class Level { Ok, Warning, Error };
  Level level = Level::Ok;
  std::string key;
  std::string message;
  std::optional<int> line;
};

/// Cross-field checks on a config text without running anything.
std::vector<ValidationItem> validate_text(const std::string& text);

/// Prints the report; exits 2 when any item is an error, 0 otherwise.
int validate_command(const std::string& config_path, std::ostream& out);

}  // namespace levyext::app

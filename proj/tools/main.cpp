#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "app/commands.hpp"

int main(int argc, char** argv) {
  using namespace levyext::app;
  CLI::App app{"Monte Carlo checks for extremes of heavy-tailed moving-average fields"};
  app.set_version_flag("--version", LEVYEXT_VERSION);
  app.require_subcommand(1);

  CommandContext ctx;
  std::uint64_t seed = 0;
  std::uint64_t replicates = 0;
  std::string out_dir = "results";

  const std::map<std::string, std::string> about = {
      {"geometry-check", "intrinsic volumes, Steiner table and grid-count limit"},
      {"tail-test", "tail ratio of the supremum against its closed-form constant"},
      {"evt-test", "Frechet limit of normalized suprema along the scaling ladder"},
      {"simulate", "one field realization: atoms and field values as CSV"},
      {"oracle-test", "no-kernel Poisson-max ladder against its exact law"},
  };
  for (const auto& name : experiment_subcommands()) {
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    sub->add_option("-c,--config", ctx.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--replicates", replicates, "override the replicate count");
    sub->add_option("--out-dir", out_dir, "directory for JSON, CSV and manifest output");
  }
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("-c,--config", ctx.config_path, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (*validate) return validate_command(ctx.config_path, std::cout);

  const std::string name = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommand(name);
  if (sub->count("--seed")) ctx.overrides.seed = seed;
  if (sub->count("--replicates")) ctx.overrides.replicates = replicates;
  ctx.out_dir = out_dir;
  try {
    return run_subcommand(name, ctx, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

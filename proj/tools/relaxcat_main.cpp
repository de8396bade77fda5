#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaxcat/commands.hpp"
#include "relaxcat/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"relaxcat: semi-implicit CAT2, MOOD and IMEX-RK2 solvers for relaxation systems"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool seed = false;
  app.add_option("--config", config_path, "flat key=value configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "extra key=value setting (repeatable)");
  app.add_flag("--seed-check", seed, "run the quick self-checks and exit");

  app.add_subcommand("run", "advance one case and write solution/diagnostics/timing CSVs");
  app.add_subcommand("convergence", "L1 error and EOC table");
  app.add_subcommand("stability", "von Neumann stability region sweep");
  app.add_subcommand("list-cases", "list the built-in test cases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : relaxcat::kExitConfigError;
  }

  if (seed) return relaxcat::seed_check(std::cout);
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return relaxcat::kExitConfigError;
  }

  relaxcat::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = relaxcat::load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw relaxcat::ConfigError("--set expects key=value");
      relaxcat::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
  } catch (const relaxcat::ConfigError& e) {
    std::cerr << "error kind=config message=\"" << e.what() << "\"\n";
    return relaxcat::kExitConfigError;
  }
  return relaxcat::run_command(app.get_subcommands().front()->get_name(), cfg, std::cout,
                               std::cerr);
}

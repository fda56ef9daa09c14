#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmlab/config.hpp"
#include "qmlab/runner.hpp"

namespace {

double parse_tol_value(const std::string& text) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw qmlab::ConfigError("--tol expects a number, got '" + text + "'");
  }
  if (used != text.size())
    throw qmlab::ConfigError("--tol expects a number, got '" + text + "'");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relative-state measurement workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_flag;
  std::uint64_t seed_flag = 0;
  std::vector<std::string> tol_flags;

  CLI::Option* seed_opts[2];
  auto add_common = [&](CLI::App* cmd, int slot) {
    cmd->add_option("--out", out_flag,
                    "Output directory (overrides config and QMLAB_OUT)");
    seed_opts[slot] = cmd->add_option("--seed", seed_flag, "Seed override");
    cmd->add_option("--tol", tol_flags,
                    "Named tolerance override, name=value (repeatable)");
  };

  CLI::App* run_cmd =
      app.add_subcommand("run", "Execute the scenario in a config file");
  run_cmd->add_option("config", config_path, "Config file")->required();
  add_common(run_cmd, 0);
  CLI::App* check_cmd = app.add_subcommand(
      "check", "Run the built-in acceptance configuration");
  add_common(check_cmd, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    qmlab::ScenarioConfig cfg = run_cmd->parsed()
                                    ? qmlab::load_config(config_path)
                                    : qmlab::default_config();
    CLI::Option* seed_opt = seed_opts[run_cmd->parsed() ? 0 : 1];
    if (seed_opt->count() > 0) cfg.seed = seed_flag;
    if (const char* env = std::getenv("QMLAB_OUT"); env && *env)
      cfg.out_dir = env;
    if (!out_flag.empty()) cfg.out_dir = out_flag;
    for (const std::string& spec : tol_flags) {
      const size_t eq = spec.find('=');
      if (eq == std::string::npos || eq == 0)
        throw qmlab::ConfigError("--tol expects name=value, got '" + spec + "'");
      cfg.tolerances[spec.substr(0, eq)] = parse_tol_value(spec.substr(eq + 1));
    }
    qmlab::validate_config(cfg);
    return qmlab::execute(cfg, std::cout);
  } catch (const qmlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qmlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

#include <unistd.h>

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "tdho/commands.hpp"
#include "tdho/config.hpp"

namespace {

// One subcommand plus the shared option set: --config reads a file first,
// then every config key is exposed as a --key override (file, then flags).
struct SubCommand {
  CLI::App* app = nullptr;
  std::string config_path;
  bool no_color = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  SubCommand(CLI::App& parent, const std::string& name, const std::string& help) {
    app = parent.add_subcommand(name, help);
    app->add_option("--config", config_path,
                    "configuration file (sections of key = value lines)");
    for (const std::string& key : tdho::config_keys()) {
      options[key] = app->add_option("--" + key, values[key],
                                     "override the config key '" + key + "'");
    }
  }

  bool selected() const { return app->parsed(); }

  tdho::ScenarioConfig build() const {
    tdho::ScenarioConfig config;
    if (!config_path.empty()) config = tdho::parse_config_file(config_path);
    for (const auto& [key, option] : options) {
      if (option->count() > 0) tdho::apply_override(config, key, values.at(key));
    }
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"time-dependent harmonic oscillator: amplitude equation, "
               "invariant-based state evolution, squeezing, and grid cross-checks"};
  app.require_subcommand(1);

  SubCommand profile(app, "profile",
                     "emit the frequency drive and amplitude time series as CSV");
  SubCommand evolve(app, "evolve",
                    "emit coherent-state means, widths, and squeezing as CSV");
  SubCommand verify(app, "verify",
                    "run the verification suite and report PASS/FAIL per check");
  SubCommand sweep(app, "sweep",
                   "emit squeezing summaries across a list of final frequencies");
  verify.app->add_flag("--no-color", verify.no_color,
                       "plain PASS/FAIL output without ANSI colors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (profile.selected()) return tdho::cmd_profile(profile.build());
    if (evolve.selected()) return tdho::cmd_evolve(evolve.build());
    if (verify.selected()) {
      const bool color = !verify.no_color && isatty(fileno(stdout)) != 0;
      return tdho::cmd_verify(verify.build(), color);
    }
    if (sweep.selected()) return tdho::cmd_sweep(sweep.build());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

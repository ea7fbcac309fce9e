// lsieve: identity suites, bound sweeps and spacing studies from the command line.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "lsieve/harness/commands.hpp"
#include "lsieve/harness/config.hpp"

namespace h = lsieve::harness;

int main(int argc, char** argv) {
  CLI::App app{"Large sieve experiments over Gaussian integer moduli"};
  app.require_subcommand(1);

  std::string config_path;
  std::string dump_config;
  std::map<std::string, std::string> flags;
  bool timing = false;

  app.add_option("--config", config_path, "Flat key = value config file; flags override it");
  app.add_option("--dump-config", dump_config, "Write the resolved config (flat, or JSON for *.json) and continue");
  const std::map<std::string, std::string> help{
      {"family", "Moduli families: all,squares,power,square_norm"},
      {"k", "Exponent of the power family"},
      {"Q", "Comma-separated Q values"},
      {"N", "Comma-separated N values"},
      {"seeds", "Comma-separated seeds"},
      {"coeffs", "Coefficient kinds: ones,random,extremal"},
      {"eps", "Epsilon in the bound formulas"},
      {"C", "Constant in the bound formulas"},
      {"tol", "Override every pass/fail tolerance"},
      {"associates", "literal or units"},
      {"range", "full or dyadic"},
      {"Q0", "Comma-separated Q0 values for weyl"},
      {"matrices", "Number of random matrices for duality"},
      {"rows", "Largest matrix row count"},
      {"cols", "Largest matrix column count"},
      {"max_points", "Budget on (r, q) pairs; 0 = unlimited"},
      {"max_operations", "Budget on pairs times support; 0 = unlimited"},
      {"threads", "Worker threads; 0 = hardware concurrency"},
      {"out", "Output path; stdout when empty"},
      {"format", "csv or json"},
  };
  for (const auto& key : h::config_keys()) {
    if (key == "timing") continue;
    app.add_option("--" + key, flags[key], help.at(key));
  }
  app.add_flag("--timing", timing, "Record wall time per row (output is no longer byte-reproducible)");
  flags.erase("timing");

  std::string command;
  const std::map<std::string, std::string> about{
      {"identities", "Run the identity suite"},
      {"sweep", "Large sieve sums against the bound formulas"},
      {"spacing", "Spacing counts and the smoothed count"},
      {"weyl", "Weyl sums and the differencing bound"},
      {"duality", "Dual best constants of random matrices"},
      {"report", "Per-family maxima of the sweep ratios"},
  };
  for (const auto& name : h::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->fallthrough();
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return h::kConfigError;
  }

  h::ExperimentConfig cfg;
  try {
    std::map<std::string, std::string> kv;
    if (!config_path.empty()) kv = h::read_flat_file(config_path);
    for (const auto& [key, value] : flags)
      if (app.count("--" + key) > 0) kv[key] = value;
    if (timing) kv["timing"] = "true";
    cfg = h::ExperimentConfig::from_flat(kv);
    cfg.validate();
    if (!dump_config.empty()) {
      std::ofstream out(dump_config);
      if (!out) throw h::ConfigError("dump-config", "cannot open \"" + dump_config + "\"");
      if (dump_config.size() > 5 && dump_config.ends_with(".json"))
        out << cfg.to_json().dump(2) << '\n';
      else
        out << h::write_flat(cfg.to_flat());
    }
  } catch (const h::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return h::kConfigError;
  }
  return h::run_command(command, cfg, std::cout, std::cerr);
}

// dyadkit command-line driver: one subcommand per experiment, CSV on stdout or --out.
#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "dyadkit/errors.hpp"
#include "dyadkit/experiment.hpp"

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> config;
  unsigned threads = 1;  // accepted for compatibility; work is deterministic and serial
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale harmonic analysis and covering experiments"};
  app.set_version_flag("--version", dyadkit::tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "64-bit seed");
  app.add_option("--out", g.out, "output CSV path (- for stdout)");
  app.add_option("--threads", g.threads, "thread hint; results do not depend on it");
  app.add_option("--config", g.config, "key=value or JSON parameter file");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : dyadkit::subcommands()) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    for (const auto& spec : dyadkit::schema(name)) {
      auto* opt = sub->add_option("--" + spec.key, values[name][spec.key], spec.help);
      opt->default_str(spec.default_value);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    dyadkit::ExperimentConfig cfg;
    if (g.config) cfg = dyadkit::ExperimentConfig::from_file(*g.config);
    std::string chosen;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) chosen = name;
    if (!cfg.subcommand.empty() && cfg.subcommand != chosen)
      throw dyadkit::ArgumentError("config file is for '" + cfg.subcommand + "', not '" +
                                   chosen + "'");
    cfg.subcommand = chosen;
    for (const auto& [key, value] : values[chosen])
      if (subs[chosen]->get_option("--" + key)->count() > 0) cfg.params[key] = value;
    if (g.seed) cfg.seed = *g.seed;
    if (g.out) cfg.out = *g.out;

    const auto table = dyadkit::run(cfg);
    dyadkit::emit(table, cfg.out);
    return 0;
  } catch (const dyadkit::Error& e) {
    std::cerr << "dyadkit: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "dyadkit: internal error: " << e.what() << "\n";
    return 4;
  }
}

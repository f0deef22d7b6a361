#include <cstdio>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "config.hpp"
#include "scenarios.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string field;
  std::size_t steps = 0;
  double horizon = 0.0;
  std::size_t cells = 0;
  double tol = 0.0;
  std::string out;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON scenario config")->check(CLI::ExistingFile);
  sub->add_option("--field", o.field, "field id or JSON spec");
  sub->add_option("--steps", o.steps, "time steps N")->check(CLI::PositiveNumber);
  sub->add_option("--horizon", o.horizon, "time horizon T")->check(CLI::PositiveNumber);
  sub->add_option("--cells", o.cells, "cells per axis")->check(CLI::PositiveNumber);
  sub->add_option("--tol", o.tol, "check tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "seed for random sampling");
}

}  // namespace

int main(int argc, char** argv) {
  using charflow::cli::ConfigError;
  using charflow::cli::ScenarioConfig;

  CLI::App app{"charflow: transport of measures along characteristics of bounded fields"};
  app.require_subcommand(1);
  Overrides o;
  std::string name;
  const std::pair<const char*, const char*> scenarios[] = {
      {"transport", "push a measure forward and verify the weak formulation"},
      {"superpose", "extract a path measure on cells and select a flow"},
      {"counterexample", "run a nonexistence oracle or counterexample scenario"},
      {"density", "compare the forward histogram with the classical density"},
      {"gallery", "list the fields and sample their bounds"},
  };
  for (const auto& [scenario, description] : scenarios) {
    CLI::App* sub = app.add_subcommand(scenario, description);
    add_common(sub, o);
    if (std::string(scenario) == "counterexample") {
      sub->add_option("name", name,
                      "sign_oracle | fixed_sign_oracle | fat_cantor_oracle | dead_curve | "
                      "signed_stationary")
          ->required();
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  CLI::App* chosen = app.get_subcommands().front();

  ScenarioConfig config;
  try {
    if (!o.config.empty()) config = charflow::cli::config_from_json(charflow::io::read_json_file(o.config));
    config.scenario = chosen->get_name();
    if (!name.empty()) config.name = name;
    if (chosen->count("--field")) config.field = charflow::io::parse_field_spec(o.field);
    if (chosen->count("--steps")) config.steps = o.steps;
    if (chosen->count("--horizon")) config.horizon = o.horizon;
    if (chosen->count("--cells")) config.cells = o.cells;
    if (chosen->count("--tol")) config.tol = o.tol;
    if (chosen->count("--out")) config.out = o.out;
    if (chosen->count("--seed")) config.seed = o.seed;
  } catch (const std::exception& e) {
    std::cerr << "charflow: " << e.what() << '\n';
    return 2;
  }

  std::string message;
  int status = 0;
  try {
    status = charflow::cli::run(config, &message);
  } catch (const std::exception& e) {
    std::cerr << "charflow: " << e.what() << '\n';
    return 1;
  }
  std::cerr << "charflow " << config.scenario << (config.name.empty() ? "" : " " + config.name)
            << ": " << message << " (" << config.out << ")\n";
  return status;
}

// weylpair <command> --scenario <file> [--out <dir>] [--seed <n>] [--tol <float>]
//
// Prints a JSON report on stdout. Exit status: 0 when every check passes, 1 when a check
// fails (its name goes to stderr), 2 for malformed input or library errors.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "weylpair/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weak Weyl pair desk-scale toolkit"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  std::uint64_t seed = 0;
  double tol = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "Directory for artifacts");
    cmd->add_option("--seed", seed, "Random seed (overrides the scenario)");
    cmd->add_option("--tol", tol, "Check tolerance (overrides the scenario)")->check(CLI::PositiveNumber);
  };

  std::string sub;
  for (const auto& name : weylpair::scenario_commands()) {
    CLI::App* cmd = app.add_subcommand(name);
    if (name == "counterexample") {
      for (const auto& s : weylpair::counterexample_subcommands()) {
        CLI::App* leaf = cmd->add_subcommand(s);
        add_common(leaf);
        leaf->callback([&sub, s] { sub = s; });
      }
      // the subcommand may also come from the scenario's "subcommand" key
      cmd->add_option("--scenario", scenario, "Scenario JSON file")->check(CLI::ExistingFile);
      cmd->add_option("--out", out_dir, "Directory for artifacts");
      cmd->add_option("--seed", seed, "Random seed");
      cmd->add_option("--tol", tol, "Check tolerance")->check(CLI::PositiveNumber);
    } else {
      add_common(cmd);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  weylpair::ScenarioOptions opt;
  for (const auto* cmd : app.get_subcommands()) opt.command = cmd->get_name();
  opt.subcommand = sub;
  const auto* chosen = app.get_subcommand(opt.command);
  auto given = [&](const char* flag) {
    if (chosen->count(flag)) return true;
    for (const auto* leaf : chosen->get_subcommands())
      if (leaf->count(flag)) return true;
    return false;
  };
  if (scenario.empty()) {
    std::cerr << "ParseError: --scenario is required\n";
    return 2;
  }
  if (given("--out")) opt.out_dir = out_dir;
  if (given("--seed")) opt.seed = seed;
  if (given("--tol")) opt.tol = tol;

  try {
    const weylpair::Report rep = weylpair::run_scenario_file(scenario, opt);
    std::cout << rep.json.dump(2) << "\n";
    if (!rep.ok) {
      std::cerr << "CheckFailed: " << rep.failed << "\n";
      return 1;
    }
    return 0;
  } catch (const weylpair::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

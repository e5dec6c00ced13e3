// invsep: separation-principle checks for invariant observer/controller pairs.
//
//   invsep <command> --config <file> --out <dir> [--dt <s>] [--t-end <s>] [--tol <x>]
//
// Exit status: 0 when every verdict passes, 1 when a verdict fails, 2 on error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "invsep/commands.hpp"
#include "invsep/errors.hpp"
#include "invsep/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Invariant observer/controller separation checks on SE(2) and SO(3)"};

  std::string command;
  std::string config_path;
  std::string out_dir;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> tol;

  app.add_option("command", command, "simulate | eigs | separation | invariance | "
                                     "ekf-compare | mech-lemma")
      ->required()
      ->check(CLI::IsMember(
          {"simulate", "eigs", "separation", "invariance", "ekf-compare", "mech-lemma"}));
  app.add_option("--config", config_path, "Scenario JSON document")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--dt", dt, "Override the integration step [s]");
  app.add_option("--t-end", t_end, "Override the simulation horizon [s]");
  app.add_option("--tol", tol, "Override the command's primary tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    invsep::ScenarioConfig config = invsep::load_scenario(config_path);
    invsep::override_timing(config, dt, t_end);
    const auto cmd = invsep::parse_command(command);
    return invsep::run(*cmd, config, out_dir, invsep::RunOptions{tol}, std::cerr);
  } catch (const invsep::Error& e) {
    std::cerr << "invsep: " << e.what() << '\n';
    return 2;
  }
}

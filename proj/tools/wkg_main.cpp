#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wkg/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Wave/Klein-Gordon null-form solver and diagnostics"};
  app.require_subcommand(1);

  std::string run_cfg, sweep_cfg, fit_dir;
  bool corrupted = false;
  auto* run = app.add_subcommand("run", "Evolve one configuration and write its artifacts");
  run->add_option("config", run_cfg, "Configuration file")->required();
  auto* verify = app.add_subcommand("verify", "Check the exact identity catalog");
  verify->add_flag("--corrupted-catalog", corrupted, "Check the sign-flipped fixture catalog instead");
  auto* sweep = app.add_subcommand("sweep", "Run one configuration per amplitude in sweep.eps");
  sweep->add_option("config", sweep_cfg, "Configuration file")->required();
  auto* fit = app.add_subcommand("fit", "Recompute fits from a run directory");
  fit->add_option("dir", fit_dir, "Directory holding regions.csv and energy.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wkg::kExitConfig;
  }

  if (*run) return wkg::run_command(run_cfg, std::cerr);
  if (*verify) return wkg::verify_command(std::cout, corrupted);
  if (*sweep) return wkg::sweep_command(sweep_cfg, std::cerr);
  return wkg::fit_command(fit_dir, std::cout);
}

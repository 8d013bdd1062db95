#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkg/data.hpp"
#include "wkg/diagnostics.hpp"
#include "wkg/energies.hpp"
#include "wkg/evolution.hpp"
#include "wkg/grid.hpp"

namespace wkg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiagnosticsToggles {
  bool energy = true;
  bool regions = true;
  bool bootstrap = false;
  bool evf = true;
};

struct RunConfig {
  GridSpec grid;
  double cfl = 0.25;
  EvolutionConfig evolution;
  DataProfile data;
  DiagnosticsToggles diagnostics;
  EnergyOptions energy;
  BootstrapConfig bootstrap;
  std::vector<double> region_T;  // dyadic windows sampled at 1.5 T; empty means all that fit the horizon
  double fit_t0 = 2.0;
  std::vector<double> eps_list;
  std::string output_dir = "run";

  // Throws ConfigError on CFL violation, data support plus horizon reaching the periodic boundary, or eps < 0.
  void validate() const;
};

// Flat "key = value" lines with dotted section prefixes; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Keys understood by parse_config.
const std::vector<std::string>& config_keys();

}  // namespace wkg

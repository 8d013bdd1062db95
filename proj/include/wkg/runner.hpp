#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkg/config.hpp"
#include "wkg/nullforms.hpp"

namespace wkg {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitFailure = 2;

// Output root read from this variable; relative output directories are placed under it.
inline constexpr const char* kOutputRootEnv = "WKG_OUTPUT_ROOT";

std::filesystem::path resolve_output_dir(const std::string& dir);

struct RunOutcome {
  RunStatus status = RunStatus::horizon;
  double T_star = 0;
  double growth_p = 0;  // NaN when the energy series is too short
  long steps = 0;
  double smallness = 0;
};

// Evolves the configured data, writing energy.csv, regions.csv, bootstrap.csv, fit.json and
// metadata.json into out_dir.
RunOutcome run_simulation(const RunConfig& cfg, const std::filesystem::path& out_dir);
int run_command(const std::filesystem::path& config_path, std::ostream& log);

struct VerifyReport {
  std::vector<IdentityResult> catalog;  // one row per catalog entry
  std::vector<IdentityResult> extra;    // plane-wave null cancellation, [Z, box], box in hyperbolic charts
  bool all_zero() const;
};

VerifyReport verify_suite(const std::vector<Identity>& catalog, int samples = 50, int degree = 3,
                          unsigned long long seed = 20240601ULL);
void print_verify(const VerifyReport& r, std::ostream& out);
int verify_command(std::ostream& out, bool corrupted = false);

// Independent runs per eps in run_<k>/ plus summary.csv; failing runs are recorded and the sweep continues.
std::vector<SweepRow> sweep_simulation(const RunConfig& cfg, const std::filesystem::path& out_dir,
                                       std::ostream& log);
int sweep_command(const std::filesystem::path& config_path, std::ostream& log);

// Decay and growth fits recomputed from regions.csv and energy.csv in dir.
nlohmann::json fit_directory(const std::filesystem::path& dir, double fit_t0 = 2.0);
int fit_command(const std::filesystem::path& dir, std::ostream& log);

}  // namespace wkg

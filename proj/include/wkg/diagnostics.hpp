#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wkg/closure.hpp"
#include "wkg/data.hpp"
#include "wkg/energies.hpp"
#include "wkg/evolution.hpp"
#include "wkg/grid.hpp"
#include "wkg/regions.hpp"

namespace wkg {

struct DecaySample {
  double T, S, amplitude;
};

struct DecayFit {
  double a_T = 0, a_S = 0, log_c = 0;
  double r2 = 1;
  std::vector<DecaySample> samples;
};

// Least squares for log amplitude = log c + a_T log T + a_S log S.
DecayFit decay_fit(const std::vector<DecaySample>& samples);

// Sup norms of one region on a time slice.
struct RegionSample {
  double t = 0;
  RegionId id;
  long cells = 0;
  double sup_du = 0, sup_v = 0, sup_dv = 0, sup_Zu = 0;
};

// One pass over the grid, grouping points by classify().
std::vector<RegionSample> sample_regions(const State& s);

enum class RegionQuantity { du, v, dv, Zu };
const char* name(RegionQuantity q);
double value(const RegionSample& r, RegionQuantity q);

// Decay fit over interior and exterior cells with S >= 1 and a positive amplitude.
DecayFit decay_fit_regions(const std::vector<RegionSample>& rows, RegionQuantity q);

struct PowerFit {
  double exponent = 0, log_c = 0, r2 = 1;
};

// Least squares for log y = log c + p log x; requires positive data.
PowerFit power_fit(const std::vector<double>& x, const std::vector<double>& y);

struct TimeValue {
  double t, value;
};

// Exponent p in E(t) ~ E(t0) (t / t0)^p; the series must span at least two octaves in t.
double growth_exponent(const std::vector<TimeValue>& series);

enum class BootstrapBound { z_u, du, z_du, d2u, dv };
const char* name(BootstrapBound b);
std::vector<BootstrapBound> all_bootstrap_bounds();

struct BootstrapConfig {
  double C = 10.0;
  double delta = 0.05;
  double eps = 0.05;
  std::vector<BootstrapBound> which = all_bootstrap_bounds();

  void validate() const;
};

struct Violation {
  BootstrapBound bound;
  double t, x1, x2;
  double value, threshold;
};

// Worst point per enabled bound on one time slice, as ratio value / threshold.
std::vector<Violation> bootstrap_slice(const ClosureResult& c, double t, const BootstrapConfig& cfg);

// Keeps the first violation of each bound across observed slices.
class BootstrapMonitor {
 public:
  BootstrapMonitor(BootstrapConfig cfg, NullFormSpec spec, std::optional<Cutoff> cutoff = std::nullopt);
  void observe(const State& s);
  void observe(const ClosureResult& c, double t);
  const std::vector<Violation>& violations() const { return first_; }
  // Largest value / threshold ratio seen per bound.
  const std::vector<double>& worst_ratio() const { return worst_; }
  bool clean() const { return first_.empty(); }

 private:
  BootstrapConfig cfg_;
  NullFormSpec spec_;
  std::optional<Cutoff> cutoff_;
  std::vector<Violation> first_;
  std::vector<double> worst_;
};

// Largest |a - b| over {2t + |x - x0| < R} across the run, relative to the largest |a|, |b| seen.
double finite_speed_check(const State& data_a, const State& data_b, double x0_1, double x0_2, double R,
                          const EvolutionConfig& cfg);

struct SweepRow {
  double eps = 0;
  double T_star = 0;
  RunStatus reason = RunStatus::horizon;
  double growth_p = 0;
};

struct SweepSettings {
  GridSpec grid;
  EvolutionConfig evolution;
  EnergyOptions energy;
  double fit_t0 = 2.0;
};

SweepRow lifespan_run(double eps, const DataProfile& profile, const SweepSettings& s,
                      std::vector<EnergyReport>* reports = nullptr);
std::vector<SweepRow> lifespan_sweep(const std::vector<double>& eps_list, const DataProfile& profile,
                                     const SweepSettings& s);

}  // namespace wkg

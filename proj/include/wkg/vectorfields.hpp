#pragma once

#include <array>
#include <string>
#include <vector>

#include "wkg/closure.hpp"
#include "wkg/grid.hpp"
#include "wkg/nullforms.hpp"

namespace wkg {

// levels[k] = d_t^k f at a common time.
struct TimeJet {
  std::vector<ScalarField> levels;
  double time = 0.0;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  const ScalarField& f() const { return levels.at(0); }
  const ScalarField& ft() const { return levels.at(1); }
  const GridSpec& grid() const { return levels.at(0).grid(); }

  static TimeJet from_levels(std::vector<ScalarField> levels);
};

TimeJet u_jet(const ClosureResult& c);
TimeJet v_jet(const ClosureResult& c);

class VectorFieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

TimeJet jet_dt(const TimeJet& j);
TimeJet jet_d(const TimeJet& j, int axis);
TimeJet apply_Z(const TimeJet& j, ZId which);
TimeJet apply_scaling(const TimeJet& j);

// Single-level forms; ft supplies d_t f.
ScalarField apply_Z(const ScalarField& f, const ScalarField& ft, ZId which);
ScalarField apply_scaling(const ScalarField& f, const ScalarField& ft);
// T_j f = d_j f + (x_j / r) d_t f, set to zero inside the r < r_min disk.
ScalarField apply_tau(const ScalarField& f, const ScalarField& ft, int j, double r_min);
// Points with r >= r_min.
RegionMask tau_mask(const GridSpec& g, double r_min);
inline double default_r_min(const GridSpec& g) { return 2.0 * g.dx(); }

struct MultiIndex {
  std::array<int, 3> alpha{0, 0, 0};  // counts of d_t, d_1, d_2
  std::vector<ZId> beta;              // Z factors, applied right to left
  int h = 1;

  int order() const { return alpha[0] + alpha[1] + alpha[2]; }
  int weight() const { return order() + h * static_cast<int>(beta.size()); }
  // Time-jet levels consumed by applying this index.
  int time_depth() const;
  std::string to_string() const;
};

// d^alpha Z^beta f, Z factors innermost.
TimeJet apply_Zgamma(const TimeJet& j, const MultiIndex& g, int cap);

// All multi-indices with weight <= cap and |beta| <= max_beta; beta as nondecreasing sequences.
std::vector<MultiIndex> enumerate_multi_indices(int cap, int h, int max_beta = 2);

// Omega_0j f - [t T_j f - (t - r)(x_j / r) d_t f], zero inside r < r_min.
ScalarField zt_relation_residual(const ScalarField& f, const ScalarField& ft, int j, double r_min);

}  // namespace wkg

#pragma once

#include <optional>
#include <vector>

#include "wkg/closure.hpp"
#include "wkg/grid.hpp"
#include "wkg/nullforms.hpp"
#include "wkg/vectorfields.hpp"

namespace wkg {

// full: integrand u_t^2 + |grad u|^2 + v_t^2 + |grad v|^2 + v^2. half: the same with a factor 1/2.
enum class Normalization { full, half };

inline double density_factor(Normalization n) { return n == Normalization::full ? 1.0 : 0.5; }

ScalarField energy_density(const ScalarField& u, const ScalarField& ut, const ScalarField& v, const ScalarField& vt,
                           Normalization norm = Normalization::full);
double energy_E(const ScalarField& u, const ScalarField& ut, const ScalarField& v, const ScalarField& vt,
                Normalization norm = Normalization::full);
double energy_E(const State& s, Normalization norm = Normalization::full);

double energy_En(const ClosureResult& c, int n, Normalization norm = Normalization::full);
double energy_En(const State& s, const NullFormSpec& spec, int n, Normalization norm = Normalization::full,
                 std::optional<Cutoff> cutoff = std::nullopt);

// Closure depth needed by energy_Evf.
int evf_closure_depth(int cap, int h);
double energy_Evf(const ClosureResult& c, int cap, int h, Normalization norm = Normalization::full);
double energy_Evf(const State& s, const NullFormSpec& spec, int cap, int h, Normalization norm = Normalization::full,
                  std::optional<Cutoff> cutoff = std::nullopt);

// Integral of p_Q(grad w)^{ij} U_i V_j, p_Q the symmetrised spatial principal coefficients of
// Q(w, d1 X) as a second-order operator on X.
double correction_B(FormId form, const ScalarField& w, const ScalarField& wt, const ScalarField& U,
                    const ScalarField& V);
// Integrand of the spec-weighted correction, background (u, v) and perturbation (U, V).
ScalarField correction_density(const State& background, const ScalarField& U, const ScalarField& V,
                               const NullFormSpec& spec);

// E(U, V) + kappa * sum_Q [n1_Q B_Q(v; U, V) + n2_Q B_Q(u; U, V)], kappa = 2 (full) or 1 (half).
double energy_quasi(const State& background, const State& uv, const NullFormSpec& spec,
                    Normalization norm = Normalization::full);

enum class GhostSide { interior, exterior };

// a = -A(t - r), A rising from 0 to a_max across the band |t - r| in [S, 2S] on the chosen side.
struct GhostProfile {
  double S = 1.0;
  GhostSide side = GhostSide::interior;
  double a_max = 1.0;

  double A(double q) const;
  double A_prime(double q) const;
};

double ghost_weight(double t, double r, double S);
double ghost_weight(double t, double r, const GhostProfile& p);
double energy_ghost(const State& s, const GhostProfile& p, Normalization norm = Normalization::full);

double control_A(const State& s);
double control_B(const ClosureResult& c);
double control_B(const State& s, const NullFormSpec& spec, std::optional<Cutoff> cutoff = std::nullopt);

struct EnergyOptions {
  int n_max = 2;
  int evf_cap = 4;
  int h = 2;
  std::vector<double> ghost_S{1, 2, 4};
  Normalization normalization = Normalization::full;
  std::optional<Cutoff> cutoff;
  bool with_evf = true;
};

struct EnergyReport {
  double time = 0;
  double E = 0;
  std::vector<double> En;  // En[n - 1] for n = 1..n_max
  double Evf = 0;
  // Sum over the three first derivatives d of E^quasi(d u, d v) about the state itself.
  double Equasi = 0;
  std::vector<double> Eghost;
  double A = 0;
  double B = 0;
};

EnergyReport make_report(const State& s, const NullFormSpec& spec, const EnergyOptions& opt);
std::vector<std::string> report_columns(const EnergyOptions& opt);
std::vector<double> report_row(const EnergyReport& r);

}  // namespace wkg

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wkg/grid.hpp"
#include "wkg/poly.hpp"

namespace wkg {

enum class RegionKind { interior, exterior, shell, outer };
const char* name(RegionKind k);

struct RegionId {
  RegionKind kind = RegionKind::shell;
  double T = 1.0;
  double S = 0.0;  // 0 for outer and shell

  bool operator==(const RegionId&) const = default;
  std::string to_string() const;
};

// Largest power of two <= x, and 1 for x < 1.
double dyadic_floor(double x);

// Outer when t <= (1 + r)/4, shell when |t - r| < 1, otherwise interior/exterior with
// S = dyadic_floor(|t - r|). Times below 1 use T = 1 and map every non-outer point to the shell.
RegionId classify(double t, double x1, double x2);
RegionId classify_r(double t, double r);

RegionMask region_mask(const GridSpec& g, double t, const RegionId& id);
// All region ids that occur on a time slice.
std::vector<RegionId> regions_at(const GridSpec& g, double t);

enum class ConeSide { interior, exterior, both };

// Cone band used by the localized norms: |t - r| <= 2 for S = 1, S <= +-(t - r) <= 2S otherwise.
RegionMask cone_band_mask(const GridSpec& g, double t, double S, ConeSide side);

struct Band {
  double S;
  ConeSide side;
  std::string label() const;
};
// S = 1 shell band plus interior and exterior bands for each S >= 2 in the list.
std::vector<Band> default_bands(const std::vector<double>& S_list);

// Streaming integral over H_rho = {t^2 - |x|^2 = rho^2} within T <= t <= 2T, parametrised by x,
// with integrand values interpolated linearly in time between consecutive snapshots.
class HyperboloidIntegrator {
 public:
  HyperboloidIntegrator(const GridSpec& g, double T, std::vector<double> rhos);

  // Feeds the integrand decomposition f = base + rho^2 * weighted at time t.
  void feed(double t, const ScalarField& base, const ScalarField& weighted);
  void feed(double t, const ScalarField& integrand);
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& rhos() const { return rhos_; }
  double first_time() const { return first_t_; }
  double last_time() const { return last_t_; }

 private:
  GridSpec grid_;
  double T_;
  std::vector<double> rhos_;
  std::vector<double> values_;
  std::vector<double> r2_;
  std::optional<ScalarField> prev_base_, prev_weighted_;
  double prev_t_ = 0.0;
  double first_t_ = 0.0, last_t_ = 0.0;
};

// Admissible hyperboloid parameters for window T: T/4 <= rho^2 <= 4 T^2.
bool rho_admissible(double rho, double T);
std::vector<double> default_rhos(double T);

double hyperboloid_integral(const std::vector<State>& snapshots, double rho, double T,
                            const std::function<ScalarField(const State&)>& integrand);

struct XTResult {
  double energy_sup = 0;
  std::vector<double> cone;        // (1/S) * space-time integral per band
  std::vector<double> hyperboloid;  // per rho
  double cone_sup = 0;
  double hyper_sup = 0;
  double total = 0;
};

class XTAccumulator {
 public:
  XTAccumulator(const GridSpec& g, double T, std::vector<Band> bands, std::vector<double> rhos, double r_min);

  // Perturbation (U, U_t, V, V_t) at its time; samples outside [T, 2T] only advance the time integration.
  void feed(const State& uv);
  XTResult result() const;
  const std::vector<Band>& bands() const { return bands_; }
  double T() const { return T_; }

 private:
  GridSpec grid_;
  double T_;
  std::vector<Band> bands_;
  std::vector<RegionMask> band_cache_;
  double r_min_;
  double energy_sup_ = 0.0;
  std::vector<double> cone_;
  std::vector<double> prev_band_;
  double prev_t_ = 0.0;
  bool have_prev_ = false;
  double first_t_ = 0.0, last_t_ = 0.0;
  HyperboloidIntegrator hyper_;
};

// sup over bands of T^{1/2} || (F, G) ||_{L^2(C_TS)}.
class YTAccumulator {
 public:
  YTAccumulator(const GridSpec& g, double T, std::vector<Band> bands);
  void feed(double t, const ScalarField& F, const ScalarField& G);
  double result() const;
  std::vector<double> per_band() const;

 private:
  GridSpec grid_;
  double T_;
  std::vector<Band> bands_;
  std::vector<double> sq_;
  std::vector<double> prev_;
  double prev_t_ = 0.0;
  bool have_prev_ = false;
};

// Time integral over [T, 2T] of a sampled quantity, with linear interpolation at the window ends.
double window_trapezoid(double t0, double f0, double t1, double f1, double T);

enum class Chart { interior, exterior };

struct HyperCoords {
  double sigma = 0, phi = 0, theta = 0;
  Chart chart = Chart::interior;
};

struct SpacetimePoint {
  double t = 0, x1 = 0, x2 = 0;
};

HyperCoords to_hyperbolic(double t, double x1, double x2, Chart chart);
SpacetimePoint from_hyperbolic(const HyperCoords& hc);
// Closed-form Jacobian e^{3 sigma} sinh(phi) or e^{3 sigma} cosh(phi).
double jacobian(const HyperCoords& hc);
// Determinant of d(t, x1, x2)/d(sigma, phi, theta) from the analytic partial derivatives.
double jacobian_determinant(const HyperCoords& hc);

// r^2 e^{2 sigma} times the chart formula for -box f, as a polynomial in (t, x1, x2),
// where e^{2 sigma} = t^2 - r^2 (interior) or r^2 - t^2 (exterior).
PolyExpr box_chart_numerator(const PolyExpr& f, Chart chart);
// Polynomial identity residual r^2 e^{2 sigma} (-box f) - numerator; must vanish.
PolyExpr box_chart_identity(const PolyExpr& f, Chart chart);
// Box f from the chart formula at a rational point inside the chart.
Rational box_chart_value(const PolyExpr& f, Chart chart, const std::array<Rational, 3>& point);
// max over sample points of |box f (Cartesian) - box f (chart)|, exact arithmetic.
double box_hyperbolic_residual(const PolyExpr& f, Chart chart, const std::vector<std::array<Rational, 3>>& points);
std::vector<std::array<Rational, 3>> chart_sample_points(Chart chart);

}  // namespace wkg

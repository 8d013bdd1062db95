#include "wkg/regions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "wkg/energies.hpp"
#include "wkg/vectorfields.hpp"

namespace wkg {

const char* name(RegionKind k) {
  switch (k) {
    case RegionKind::interior: return "interior";
    case RegionKind::exterior: return "exterior";
    case RegionKind::shell: return "shell";
    case RegionKind::outer: return "outer";
  }
  return "?";
}

std::string RegionId::to_string() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(T=%g,S=%g)", name(kind), T, S);
  return buf;
}

double dyadic_floor(double x) {
  if (!(x >= 1.0)) return 1.0;
  int e = 0;
  std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
  return std::ldexp(1.0, e - 1);
}

RegionId classify_r(double t, double r) {
  RegionId id;
  id.T = dyadic_floor(t);
  if (t <= (1.0 + r) / 4.0) {
    id.kind = RegionKind::outer;
    return id;
  }
  const double q = t - r;
  if (t < 1.0 || std::abs(q) < 1.0) {
    id.kind = RegionKind::shell;
    return id;
  }
  id.kind = q > 0 ? RegionKind::interior : RegionKind::exterior;
  id.S = dyadic_floor(std::abs(q));
  return id;
}

RegionId classify(double t, double x1, double x2) { return classify_r(t, std::hypot(x1, x2)); }

RegionMask region_mask(const GridSpec& g, double t, const RegionId& id) {
  RegionMask m = RegionMask::none(g);
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) m.bits[g.index(a, b)] = classify(t, g.coord(a), g.coord(b)) == id;
  return m;
}

std::vector<RegionId> regions_at(const GridSpec& g, double t) {
  std::vector<RegionId> ids;
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const RegionId id = classify(t, g.coord(a), g.coord(b));
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  return ids;
}

RegionMask cone_band_mask(const GridSpec& g, double t, double S, ConeSide side) {
  RegionMask m = RegionMask::none(g);
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const double q = t - std::hypot(g.coord(a), g.coord(b));
      bool in = false;
      if (S <= 1.0) {
        in = std::abs(q) <= 2.0;
      } else {
        const bool inner = q >= S && q <= 2.0 * S;
        const bool outer = -q >= S && -q <= 2.0 * S;
        in = (side != ConeSide::exterior && inner) || (side != ConeSide::interior && outer);
      }
      m.bits[g.index(a, b)] = in;
    }
  return m;
}

std::string Band::label() const {
  char buf[64];
  const char* s = side == ConeSide::interior ? "+" : (side == ConeSide::exterior ? "-" : "");
  std::snprintf(buf, sizeof buf, "S%g%s", S, s);
  return buf;
}

std::vector<Band> default_bands(const std::vector<double>& S_list) {
  std::vector<Band> out;
  for (double S : S_list) {
    if (S <= 1.0) {
      out.push_back({1.0, ConeSide::both});
    } else {
      out.push_back({S, ConeSide::interior});
      out.push_back({S, ConeSide::exterior});
    }
  }
  return out;
}

double window_trapezoid(double t0, double f0, double t1, double f1, double T) {
  const double lo = std::max(t0, T), hi = std::min(t1, 2.0 * T);
  if (!(hi > lo) || !(t1 > t0)) return 0.0;
  auto lerp = [&](double t) { return f0 + (f1 - f0) * (t - t0) / (t1 - t0); };
  return 0.5 * (hi - lo) * (lerp(lo) + lerp(hi));
}

bool rho_admissible(double rho, double T) {
  const double r2 = rho * rho;
  return rho > 0.0 && r2 >= 0.25 * T && r2 <= 4.0 * T * T;
}

std::vector<double> default_rhos(double T) {
  std::vector<double> out;
  for (double r2 = T; r2 <= T * T * (1.0 + 1e-12); r2 *= 2.0) out.push_back(std::sqrt(r2));
  if (out.empty()) out.push_back(std::sqrt(T));
  return out;
}

HyperboloidIntegrator::HyperboloidIntegrator(const GridSpec& g, double T, std::vector<double> rhos)
    : grid_(g), T_(T), rhos_(std::move(rhos)), values_(rhos_.size(), 0.0), r2_(g.size()) {
  for (double rho : rhos_)
    if (!rho_admissible(rho, T)) throw std::invalid_argument("hyperboloid: rho outside admissible band");
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) r2_[g.index(a, b)] = g.coord(a) * g.coord(a) + g.coord(b) * g.coord(b);
}

void HyperboloidIntegrator::feed(double t, const ScalarField& integrand) {
  feed(t, integrand, ScalarField(integrand.grid(), t));
}

void HyperboloidIntegrator::feed(double t, const ScalarField& base, const ScalarField& weighted) {
  if (!prev_base_) {
    first_t_ = t;
  } else if (!(t > prev_t_)) {
    throw std::invalid_argument("hyperboloid: snapshot times must increase");
  } else if (prev_t_ < 2.0 * T_ && t > T_) {
    const double h2 = grid_.dx() * grid_.dx();
    const double span = t - prev_t_;
    for (std::size_t k = 0; k < rhos_.size(); ++k) {
      const double rho2 = rhos_[k] * rhos_[k];
      double acc = 0.0;
      for (std::size_t q = 0; q < r2_.size(); ++q) {
        const double th = std::sqrt(rho2 + r2_[q]);
        if (!(th > prev_t_ && th <= t) || th < T_ || th > 2.0 * T_) continue;
        const double w = (th - prev_t_) / span;
        const double b = (1.0 - w) * (*prev_base_)[q] + w * base[q];
        const double c = (1.0 - w) * (*prev_weighted_)[q] + w * weighted[q];
        acc += b + rho2 * c;
      }
      values_[k] += acc * h2;
    }
  }
  prev_base_ = base;
  prev_weighted_ = weighted;
  prev_t_ = t;
  last_t_ = t;
}

double hyperboloid_integral(const std::vector<State>& snapshots, double rho, double T,
                            const std::function<ScalarField(const State&)>& integrand) {
  if (snapshots.empty()) throw std::invalid_argument("hyperboloid: no snapshots");
  HyperboloidIntegrator hi(snapshots.front().grid(), T, {rho});
  for (const State& s : snapshots) hi.feed(s.time, integrand(s));
  const double tmax = std::min(2.0 * T, std::sqrt(rho * rho + 2.0 * snapshots.front().grid().half_width *
                                                                    snapshots.front().grid().half_width));
  if (hi.first_time() > std::max(T, rho) + 1e-9 || hi.last_time() < tmax - 1e-9)
    throw std::invalid_argument("hyperboloid: snapshots do not cover the window");
  return hi.values()[0];
}

XTAccumulator::XTAccumulator(const GridSpec& g, double T, std::vector<Band> bands, std::vector<double> rhos,
                             double r_min)
    : grid_(g), T_(T), bands_(std::move(bands)), r_min_(r_min), cone_(bands_.size(), 0.0),
      hyper_(g, T, std::move(rhos)) {}

void XTAccumulator::feed(const State& uv) {
  const double t = uv.time;
  if (t < 0.5 * T_ || (have_prev_ && prev_t_ > 2.0 * T_)) {
    prev_t_ = t;
    last_t_ = t;
    return;
  }
  if (!have_prev_) first_t_ = t;
  if (t >= T_ - 1e-9 && t <= 2.0 * T_ + 1e-9) energy_sup_ = std::max(energy_sup_, energy_E(uv));

  // Tangential density |T U|^2 + |T V|^2 + V^2 away from r = 0.
  ScalarField tang(grid_, t);
  for (int j = 1; j <= 2; ++j) {
    const ScalarField tu = apply_tau(uv.u, uv.ut, j, r_min_);
    const ScalarField tv = apply_tau(uv.v, uv.vt, j, r_min_);
    for (std::size_t q = 0; q < tang.size(); ++q) tang[q] += tu[q] * tu[q] + tv[q] * tv[q];
  }
  for (std::size_t q = 0; q < tang.size(); ++q) tang[q] += uv.v[q] * uv.v[q];
  std::vector<double> bvals;
  for (const Band& b : bands_) bvals.push_back(integrate(tang, cone_band_mask(grid_, t, b.S, b.side)));
  if (have_prev_)
    for (std::size_t k = 0; k < bands_.size(); ++k)
      cone_[k] += window_trapezoid(prev_t_, prev_band_[k], t, bvals[k], T_) / bands_[k].S;
  prev_band_ = std::move(bvals);

  ScalarField base(grid_, t), weighted(grid_, t);
  for (ZId z : {ZId::omega12, ZId::omega01, ZId::omega02}) {
    const ScalarField zu = apply_Z(uv.u, uv.ut, z);
    const ScalarField zv = apply_Z(uv.v, uv.vt, z);
    for (std::size_t q = 0; q < base.size(); ++q) base[q] += zu[q] * zu[q] + zv[q] * zv[q];
  }
  base *= 1.0 / (T_ * T_);
  for (std::size_t q = 0; q < base.size(); ++q) base[q] += uv.v[q] * uv.v[q];
  const ScalarField u1 = detail::d1(uv.u, 1), u2 = detail::d1(uv.u, 2);
  const ScalarField v1 = detail::d1(uv.v, 1), v2 = detail::d1(uv.v, 2);
  for (std::size_t q = 0; q < weighted.size(); ++q)
    weighted[q] = uv.ut[q] * uv.ut[q] + u1[q] * u1[q] + u2[q] * u2[q] + uv.vt[q] * uv.vt[q] + v1[q] * v1[q] +
                  v2[q] * v2[q];
  weighted *= 1.0 / (T_ * T_);
  hyper_.feed(t, base, weighted);

  prev_t_ = t;
  last_t_ = t;
  have_prev_ = true;
}

XTResult XTAccumulator::result() const {
  if (!have_prev_ || first_t_ > T_ + 1e-9 || last_t_ < 2.0 * T_ - 1e-9)
    throw std::invalid_argument("xt_accumulate: samples do not cover [T, 2T]");
  XTResult r;
  r.energy_sup = energy_sup_;
  r.cone = cone_;
  r.hyperboloid = hyper_.values();
  for (double c : r.cone) r.cone_sup = std::max(r.cone_sup, c);
  for (double h : r.hyperboloid) r.hyper_sup = std::max(r.hyper_sup, h);
  r.total = r.energy_sup + r.cone_sup + r.hyper_sup;
  return r;
}

YTAccumulator::YTAccumulator(const GridSpec& g, double T, std::vector<Band> bands)
    : grid_(g), T_(T), bands_(std::move(bands)), sq_(bands_.size(), 0.0) {}

void YTAccumulator::feed(double t, const ScalarField& F, const ScalarField& G) {
  ScalarField dens = F * F;
  dens += G * G;
  std::vector<double> vals;
  for (const Band& b : bands_) vals.push_back(integrate(dens, cone_band_mask(grid_, t, b.S, b.side)));
  if (have_prev_)
    for (std::size_t k = 0; k < bands_.size(); ++k) sq_[k] += window_trapezoid(prev_t_, prev_[k], t, vals[k], T_);
  prev_ = std::move(vals);
  prev_t_ = t;
  have_prev_ = true;
}

std::vector<double> YTAccumulator::per_band() const {
  std::vector<double> out;
  for (double s : sq_) out.push_back(std::sqrt(T_) * std::sqrt(std::max(0.0, s)));
  return out;
}

double YTAccumulator::result() const {
  double m = 0.0;
  for (double v : per_band()) m = std::max(m, v);
  return m;
}

HyperCoords to_hyperbolic(double t, double x1, double x2, Chart chart) {
  const double r = std::hypot(x1, x2);
  HyperCoords hc;
  hc.chart = chart;
  hc.theta = std::atan2(x1, x2);
  if (chart == Chart::interior) {
    if (!(t > r)) throw std::domain_error("to_hyperbolic: interior chart needs t > |x|");
    hc.sigma = 0.5 * std::log((t - r) * (t + r));
    hc.phi = std::atanh(r / t);
  } else {
    if (!(r > std::abs(t))) throw std::domain_error("to_hyperbolic: exterior chart needs |x| > |t|");
    hc.sigma = 0.5 * std::log((r - t) * (r + t));
    hc.phi = std::atanh(t / r);
  }
  return hc;
}

SpacetimePoint from_hyperbolic(const HyperCoords& hc) {
  const double e = std::exp(hc.sigma);
  const double ch = std::cosh(hc.phi), sh = std::sinh(hc.phi);
  if (hc.chart == Chart::interior) return {e * ch, e * sh * std::sin(hc.theta), e * sh * std::cos(hc.theta)};
  return {e * sh, e * ch * std::sin(hc.theta), e * ch * std::cos(hc.theta)};
}

double jacobian(const HyperCoords& hc) {
  return std::exp(3.0 * hc.sigma) * (hc.chart == Chart::interior ? std::sinh(hc.phi) : std::cosh(hc.phi));
}

double jacobian_determinant(const HyperCoords& hc) {
  const double e = std::exp(hc.sigma);
  const double ch = std::cosh(hc.phi), sh = std::sinh(hc.phi);
  const double s = std::sin(hc.theta), c = std::cos(hc.theta);
  // Columns: d/dsigma, d/dphi, d/dtheta of (t, x1, x2); the radial profile is (a, b) = (t, r).
  const double a = hc.chart == Chart::interior ? e * ch : e * sh;
  const double b = hc.chart == Chart::interior ? e * sh : e * ch;
  const double M[3][3] = {{a, b, 0.0}, {b * s, a * s, b * c}, {b * c, a * c, -b * s}};
  const double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                     M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                     M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  return std::abs(det);
}

namespace {

constexpr int kChartCap = 14;

struct ChartTerms {
  PolyExpr t, x1, x2, r2;
};

ChartTerms chart_vars() {
  ChartTerms c{PolyExpr::variable(Var::t, kChartCap), PolyExpr::variable(Var::x1, kChartCap),
               PolyExpr::variable(Var::x2, kChartCap), PolyExpr(Rational(0), kChartCap)};
  c.r2 = c.x1 * c.x1 + c.x2 * c.x2;
  return c;
}

PolyExpr with_cap(const PolyExpr& f) { return f * PolyExpr(Rational(1), kChartCap); }

PolyExpr radial_part(const PolyExpr& f, const ChartTerms& c) {
  return c.x1 * f.derivative(Var::x1) + c.x2 * f.derivative(Var::x2);
}

}  // namespace

PolyExpr box_chart_numerator(const PolyExpr& f_in, Chart chart) {
  const ChartTerms c = chart_vars();
  PolyExpr f(Rational(0), kChartCap);
  f += f_in;
  const PolyExpr ft = f.derivative(Var::t);
  const PolyExpr S1 = poly_scaling(f);
  const PolyExpr S2 = poly_scaling(S1);
  // r^2 D^2 f with D = r d_t + t d_r
  const PolyExpr xx = c.x1 * c.x1 * f.derivative(Var::x1).derivative(Var::x1) +
                      Rational(2) * c.x1 * c.x2 * f.derivative(Var::x1).derivative(Var::x2) +
                      c.x2 * c.x2 * f.derivative(Var::x2).derivative(Var::x2);
  const PolyExpr r2D2 = c.r2 * c.r2 * ft.derivative(Var::t) + Rational(2) * c.t * c.r2 * radial_part(ft, c) +
                        c.t * c.t * xx + c.r2 * radial_part(f, c) + c.t * c.r2 * ft;
  // r^2 (t/r) D f
  const PolyExpr r2TD = c.r2 * c.t * ft + c.t * c.t * radial_part(f, c);
  const PolyExpr rot2 = poly_omega12(poly_omega12(f));
  const PolyExpr tt_rr = c.t * c.t - c.r2;
  if (chart == Chart::interior) return -(c.r2 * S2) - c.r2 * S1 + r2D2 + r2TD + tt_rr * rot2;
  return c.r2 * S2 + c.r2 * S1 - r2D2 - r2TD - tt_rr * rot2;
}

PolyExpr box_chart_identity(const PolyExpr& f_in, Chart chart) {
  const ChartTerms c = chart_vars();
  const PolyExpr f = with_cap(f_in);
  const PolyExpr e2s = chart == Chart::interior ? c.t * c.t - c.r2 : c.r2 - c.t * c.t;
  return -(c.r2 * e2s * poly_box(f)) - box_chart_numerator(f, chart);
}

Rational box_chart_value(const PolyExpr& f, Chart chart, const std::array<Rational, 3>& p) {
  const Rational r2 = p[1] * p[1] + p[2] * p[2];
  const Rational tt = p[0] * p[0];
  const Rational e2s = chart == Chart::interior ? tt - r2 : r2 - tt;
  if (r2 == 0 || e2s <= 0 || (chart == Chart::interior && p[0] <= 0))
    throw std::domain_error("box_chart_value: sample point outside chart");
  return -box_chart_numerator(f, chart).evaluate(p) / (r2 * e2s);
}

double box_hyperbolic_residual(const PolyExpr& f, Chart chart, const std::vector<std::array<Rational, 3>>& points) {
  const PolyExpr box = poly_box(with_cap(f));
  Rational worst = 0;
  for (const auto& p : points) {
    Rational d = box.evaluate(p) - box_chart_value(f, chart, p);
    if (d < 0) d = -d;
    if (d > worst) worst = d;
  }
  return static_cast<double>(worst);
}

std::vector<std::array<Rational, 3>> chart_sample_points(Chart chart) {
  using R = Rational;
  if (chart == Chart::interior)
    return {{R(3), R(1), R(1)}, {R(5), R(3, 2), R(-2)}, {R(7, 2), R(1, 3), R(2)}, {R(10), R(-6), R(5)},
            {R(2), R(1, 5), R(-1, 7)}};
  return {{R(1), R(3), R(1)}, {R(1, 2), R(-2), R(5, 2)}, {R(0), R(1), R(1)}, {R(4), R(-3), R(7)},
          {R(3, 2), R(1, 4), R(-9, 4)}};
}

}  // namespace wkg

#include "wkg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "wkg/vectorfields.hpp"

namespace wkg {

namespace {

struct LsqResult {
  Eigen::VectorXd coef;
  double r2;
};

LsqResult least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) throw std::invalid_argument("fit: degenerate design matrix");
  LsqResult r{qr.solve(y), 1.0};
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  const double ss_res = (y - X * r.coef).squaredNorm();
  r.r2 = ss_tot > 1e-300 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return r;
}

}  // namespace

DecayFit decay_fit(const std::vector<DecaySample>& samples) {
  std::vector<std::pair<double, double>> cells;
  for (const auto& s : samples) {
    if (!(s.amplitude > 0.0) || !(s.T > 0.0) || !(s.S > 0.0)) throw std::invalid_argument("decay_fit: non-positive sample");
    if (std::find(cells.begin(), cells.end(), std::make_pair(s.T, s.S)) == cells.end()) cells.emplace_back(s.T, s.S);
  }
  if (cells.size() < 4) throw std::invalid_argument("decay_fit: need at least 4 distinct (T, S) cells");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    X(k, 0) = 1.0;
    X(k, 1) = std::log(samples[k].T);
    X(k, 2) = std::log(samples[k].S);
    y(k) = std::log(samples[k].amplitude);
  }
  const LsqResult r = least_squares(X, y);
  return DecayFit{r.coef(1), r.coef(2), r.coef(0), r.r2, samples};
}

std::vector<RegionSample> sample_regions(const State& s) {
  const GridSpec& g = s.grid();
  const ScalarField u1 = detail::d1(s.u, 1), u2 = detail::d1(s.u, 2);
  const ScalarField v1 = detail::d1(s.v, 1), v2 = detail::d1(s.v, 2);
  const ScalarField z12 = apply_Z(s.u, s.ut, ZId::omega12);
  const ScalarField z01 = apply_Z(s.u, s.ut, ZId::omega01);
  const ScalarField z02 = apply_Z(s.u, s.ut, ZId::omega02);
  std::vector<RegionSample> rows;
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const RegionId id = classify(s.time, g.coord(a), g.coord(b));
      auto it = std::find_if(rows.begin(), rows.end(), [&](const RegionSample& r) { return r.id == id; });
      if (it == rows.end()) {
        rows.push_back(RegionSample{s.time, id});
        it = rows.end() - 1;
      }
      const std::size_t k = g.index(a, b);
      it->cells += 1;
      it->sup_du = std::max({it->sup_du, std::abs(s.ut[k]), std::abs(u1[k]), std::abs(u2[k])});
      it->sup_v = std::max(it->sup_v, std::abs(s.v[k]));
      it->sup_dv = std::max({it->sup_dv, std::abs(s.vt[k]), std::abs(v1[k]), std::abs(v2[k])});
      it->sup_Zu = std::max({it->sup_Zu, std::abs(z12[k]), std::abs(z01[k]), std::abs(z02[k])});
    }
  std::sort(rows.begin(), rows.end(), [](const RegionSample& x, const RegionSample& y) {
    if (x.id.kind != y.id.kind) return x.id.kind < y.id.kind;
    return x.id.S < y.id.S;
  });
  return rows;
}

const char* name(RegionQuantity q) {
  switch (q) {
    case RegionQuantity::du: return "du";
    case RegionQuantity::v: return "v";
    case RegionQuantity::dv: return "dv";
    case RegionQuantity::Zu: return "Zu";
  }
  return "?";
}

double value(const RegionSample& r, RegionQuantity q) {
  switch (q) {
    case RegionQuantity::du: return r.sup_du;
    case RegionQuantity::v: return r.sup_v;
    case RegionQuantity::dv: return r.sup_dv;
    case RegionQuantity::Zu: return r.sup_Zu;
  }
  return 0.0;
}

DecayFit decay_fit_regions(const std::vector<RegionSample>& rows, RegionQuantity q) {
  std::vector<DecaySample> samples;
  for (const auto& r : rows) {
    if (r.id.kind != RegionKind::interior && r.id.kind != RegionKind::exterior) continue;
    const double a = value(r, q);
    if (r.id.S >= 1.0 && a > 0.0) samples.push_back({r.id.T, r.id.S, a});
  }
  return decay_fit(samples);
}

PowerFit power_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("power_fit: need matching samples");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw std::invalid_argument("power_fit: non-positive sample");
    X(k, 0) = 1.0;
    X(k, 1) = std::log(x[k]);
    Y(k) = std::log(y[k]);
  }
  const LsqResult r = least_squares(X, Y);
  return PowerFit{r.coef(1), r.coef(0), r.r2};
}

double growth_exponent(const std::vector<TimeValue>& series) {
  if (series.size() < 2) throw std::invalid_argument("growth_exponent: need at least two samples");
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  std::vector<double> t, e;
  for (const auto& s : series) {
    if (!(s.value > 0.0)) throw std::invalid_argument("growth_exponent: non-positive energy");
    if (!(s.t > 0.0)) throw std::invalid_argument("growth_exponent: non-positive time");
    tmin = std::min(tmin, s.t);
    tmax = std::max(tmax, s.t);
    t.push_back(s.t);
    e.push_back(s.value);
  }
  if (tmax < 4.0 * tmin * (1.0 - 1e-12)) throw std::invalid_argument("growth_exponent: time range below two octaves");
  return power_fit(t, e).exponent;
}

const char* name(BootstrapBound b) {
  switch (b) {
    case BootstrapBound::z_u: return "Zu";
    case BootstrapBound::du: return "du";
    case BootstrapBound::z_du: return "Zdu";
    case BootstrapBound::d2u: return "d2u";
    case BootstrapBound::dv: return "dv";
  }
  return "?";
}

std::vector<BootstrapBound> all_bootstrap_bounds() {
  return {BootstrapBound::z_u, BootstrapBound::du, BootstrapBound::z_du, BootstrapBound::d2u, BootstrapBound::dv};
}

void BootstrapConfig::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("bootstrap: C must be > 0");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("bootstrap: delta must lie in (0, 1/2)");
  if (!(eps >= 0.0)) throw std::invalid_argument("bootstrap: eps must be >= 0");
}

namespace {

// Pointwise max of |f| over a set of fields.
void fold_max(ScalarField& acc, const ScalarField& f) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = std::max(acc[k], std::abs(f[k]));
}

// Jet of d^alpha u built from the closure levels.
TimeJet derivative_jet(const std::vector<ScalarField>& levels, int at, int a1, int a2) {
  TimeJet j;
  j.time = levels[0].time();
  for (std::size_t k = static_cast<std::size_t>(at); k < levels.size(); ++k)
    j.levels.push_back(spatial_deriv(levels[k], a1, a2));
  return j;
}

}  // namespace

std::vector<Violation> bootstrap_slice(const ClosureResult& c, double t, const BootstrapConfig& cfg) {
  cfg.validate();
  if (c.u.size() < 5) throw std::invalid_argument("bootstrap: closure depth must be >= 4");
  const GridSpec& g = c.u[0].grid();
  std::vector<Violation> out;
  const ZId zs[3] = {ZId::omega12, ZId::omega01, ZId::omega02};
  for (BootstrapBound b : cfg.which) {
    ScalarField m(g, t);
    switch (b) {
      case BootstrapBound::z_u:
        for (ZId z : zs) fold_max(m, apply_Z(c.u[0], c.u[1], z));
        break;
      case BootstrapBound::du:
        fold_max(m, c.u[1]);
        fold_max(m, detail::d1(c.u[0], 1));
        fold_max(m, detail::d1(c.u[0], 2));
        break;
      case BootstrapBound::z_du:
        for (int order = 1; order <= 2; ++order)
          for (int at = order; at >= 0; --at)
            for (int a1 = order - at; a1 >= 0; --a1) {
              const TimeJet dj = derivative_jet(c.u, at, a1, order - at - a1);
              for (ZId z : zs) fold_max(m, apply_Z(dj, z).levels[0]);
            }
        break;
      case BootstrapBound::d2u:
        for (int order = 2; order <= 3; ++order)
          for (int at = order; at >= 0; --at)
            for (int a1 = order - at; a1 >= 0; --a1) fold_max(m, spatial_deriv(c.u[at], a1, order - at - a1));
        break;
      case BootstrapBound::dv:
        for (int order = 1; order <= 3; ++order)
          for (int at = order; at >= 0; --at)
            for (int a1 = order - at; a1 >= 0; --a1) fold_max(m, spatial_deriv(c.v[at], a1, order - at - a1));
        break;
    }
    // Worst ratio against the weighted threshold.
    double worst = -1.0;
    Violation v{b, t, 0, 0, 0, 0};
    for (int jb = 0; jb < g.n; ++jb)
      for (int ia = 0; ia < g.n; ++ia) {
        const double x1 = g.coord(ia), x2 = g.coord(jb);
        const double r = std::hypot(x1, x2);
        const double jp = std::sqrt(1.0 + (t + r) * (t + r));
        const double jm = std::sqrt(1.0 + (t - r) * (t - r));
        double w = 1.0;
        switch (b) {
          case BootstrapBound::z_u: w = std::pow(jm, cfg.delta); break;
          case BootstrapBound::du: w = std::pow(jp, -0.5) * std::pow(jm, -0.5 + cfg.delta); break;
          case BootstrapBound::z_du: w = 1.0; break;
          case BootstrapBound::d2u: w = std::pow(jp, -0.5) * std::pow(jm, -0.5 - cfg.delta); break;
          case BootstrapBound::dv: w = 1.0 / jp; break;
        }
        const double thr = cfg.C * cfg.eps * w;
        const double val = m.at(ia, jb);
        const double ratio = thr > 0.0 ? val / thr : (val > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (ratio > worst) {
          worst = ratio;
          v = Violation{b, t, x1, x2, val, thr};
        }
      }
    out.push_back(v);
  }
  return out;
}

BootstrapMonitor::BootstrapMonitor(BootstrapConfig cfg, NullFormSpec spec, std::optional<Cutoff> cutoff)
    : cfg_(std::move(cfg)), spec_(spec), cutoff_(cutoff), worst_(cfg_.which.size(), 0.0) {
  cfg_.validate();
}

void BootstrapMonitor::observe(const State& s) {
  observe(time_deriv_closure(s, spec_, 4, kDefaultClosureMax, cutoff_), s.time);
}

void BootstrapMonitor::observe(const ClosureResult& c, double t) {
  const auto slice = bootstrap_slice(c, t, cfg_);
  for (std::size_t k = 0; k < slice.size(); ++k) {
    const Violation& v = slice[k];
    const double ratio = v.threshold > 0.0 ? v.value / v.threshold : (v.value > 0.0 ? 1e300 : 0.0);
    worst_[k] = std::max(worst_[k], ratio);
    if (ratio <= 1.0) continue;
    const bool seen = std::any_of(first_.begin(), first_.end(), [&](const Violation& f) { return f.bound == v.bound; });
    if (!seen) first_.push_back(v);
  }
}

double finite_speed_check(const State& data_a, const State& data_b, double x0_1, double x0_2, double R,
                          const EvolutionConfig& cfg) {
  cfg.validate();
  data_a.validate();
  data_b.validate();
  const GridSpec& g = data_a.grid();
  Stepper stepper(cfg.scheme, g.dt, nonlinear_sources(cfg.spec, cfg.cutoff()));
  std::vector<State> sys{data_a, data_b};
  double diff = 0.0, scale = 0.0;
  auto measure = [&]() {
    const double t = sys[0].time;
    scale = std::max({scale, sys[0].max_abs(), sys[1].max_abs()});
    for (int b = 0; b < g.n; ++b)
      for (int a = 0; a < g.n; ++a) {
        if (!(2.0 * t + std::hypot(g.coord(a) - x0_1, g.coord(b) - x0_2) < R)) continue;
        const std::size_t k = g.index(a, b);
        diff = std::max({diff, std::abs(sys[0].u[k] - sys[1].u[k]), std::abs(sys[0].ut[k] - sys[1].ut[k]),
                         std::abs(sys[0].v[k] - sys[1].v[k]), std::abs(sys[0].vt[k] - sys[1].vt[k])});
      }
  };
  measure();
  const long nsteps = std::lround(std::ceil(cfg.horizon / g.dt - 1e-9));
  for (long n = 1; n <= nsteps; ++n) {
    stepper.step(sys);
    if (!sys[0].all_finite() || !sys[1].all_finite()) throw std::runtime_error("finite_speed_check: blow-up");
    measure();
  }
  return scale > 0.0 ? diff / scale : 0.0;
}

SweepRow lifespan_run(double eps, const DataProfile& profile, const SweepSettings& s,
                      std::vector<EnergyReport>* reports) {
  DataProfile p = profile;
  p.amplitude = eps;
  const State data = initial_data(s.grid, p);
  std::vector<EnergyReport> local;
  std::vector<EnergyReport>& reps = reports ? *reports : local;
  EnergyOptions eo = s.energy;
  eo.cutoff = s.evolution.cutoff();
  EvolutionConfig ec = s.evolution;
  ec.keep_snapshots = false;
  const Trajectory tr = evolve(data, ec, {[&](const State& st) { reps.push_back(make_report(st, ec.spec, eo)); }});
  SweepRow row{eps, tr.last_healthy_time, tr.status, std::numeric_limits<double>::quiet_NaN()};
  std::vector<TimeValue> series;
  for (const auto& r : reps)
    if (r.time >= s.fit_t0 && r.Evf > 0.0) series.push_back({r.time, r.Evf});
  if (series.size() >= 2 && series.back().t >= 4.0 * series.front().t) row.growth_p = growth_exponent(series);
  return row;
}

std::vector<SweepRow> lifespan_sweep(const std::vector<double>& eps_list, const DataProfile& profile,
                                     const SweepSettings& s) {
  std::vector<SweepRow> rows;
  for (double eps : eps_list) {
    if (!(eps >= 0.0)) throw std::invalid_argument("lifespan_sweep: eps must be >= 0");
    rows.push_back(lifespan_run(eps, profile, s));
  }
  return rows;
}

}  // namespace wkg

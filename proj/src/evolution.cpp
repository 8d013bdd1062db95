#include "wkg/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "wkg/energies.hpp"

namespace wkg {

void EvolutionConfig::validate() const {
  spec.validate();
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("evolution: horizon must be >= 0");
  if (truncation_T0 && !(*truncation_T0 > 0.0)) throw std::invalid_argument("evolution: truncation_T0 must be > 0");
  if (snapshot_stride < 1) throw std::invalid_argument("evolution: snapshot_stride must be >= 1");
  if (!(blowup_factor > 1.0)) throw std::invalid_argument("evolution: blowup_factor must be > 1");
}

std::optional<Cutoff> EvolutionConfig::cutoff() const {
  if (truncation_T0) return Cutoff{*truncation_T0};
  return std::nullopt;
}

Sources rhs(const State& s, const NullFormSpec& spec) { return sources_mixed(spec, s, s); }

Sources rhs_truncated(const State& s, const NullFormSpec& spec, double T0) {
  if (!(T0 > 0.0)) throw std::invalid_argument("rhs_truncated: T0 must be > 0");
  const double chi = Cutoff{T0}.value(s.time);
  if (chi == 0.0) return Sources{ScalarField(s.grid(), s.time), ScalarField(s.grid(), s.time)};
  Sources out = rhs(s, spec);
  if (chi != 1.0) {
    out.fu *= chi;
    out.fv *= chi;
  }
  return out;
}

Sources linearized_rhs(const State& background, const State& uv, const NullFormSpec& spec) {
  Sources a = sources_mixed(spec, background, uv);
  Sources b = sources_mixed(spec, uv, background);
  a.fu += b.fu;
  a.fv += b.fv;
  return a;
}

SourceFn nonlinear_sources(const NullFormSpec& spec, std::optional<Cutoff> cutoff) {
  return [spec, cutoff](const std::vector<State>& sys) {
    std::vector<Sources> out;
    for (const State& s : sys) {
      if (cutoff) {
        out.push_back(rhs_truncated(s, spec, cutoff->T0));
      } else {
        out.push_back(rhs(s, spec));
      }
    }
    return out;
  };
}

Stepper::Stepper(Scheme scheme, double dt, SourceFn sources)
    : scheme_(scheme), dt_(dt), sources_(std::move(sources)) {
  if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be > 0");
}

std::vector<Stepper::Accel> Stepper::accel(const std::vector<State>& sys) const {
  std::vector<Sources> src;
  if (sources_) src = sources_(sys);
  std::vector<Accel> out;
  out.reserve(sys.size());
  for (std::size_t c = 0; c < sys.size(); ++c) {
    const State& s = sys[c];
    Accel a{detail::lap(s.u), detail::lap(s.v)};
    a.av -= s.v;
    if (!src.empty()) {
      a.au += src[c].fu;
      a.av += src[c].fv;
    }
    out.push_back(std::move(a));
  }
  return out;
}

void Stepper::step(std::vector<State>& sys) {
  if (scheme_ == Scheme::leapfrog) {
    step_leapfrog(sys);
  } else {
    step_rk4(sys);
  }
}

void Stepper::step_leapfrog(std::vector<State>& sys) {
  if (!cached_) cached_ = accel(sys);
  const double h = dt_;
  std::vector<State> predicted;
  predicted.reserve(sys.size());
  for (std::size_t c = 0; c < sys.size(); ++c) {
    State& s = sys[c];
    const Accel& a = (*cached_)[c];
    s.ut.axpy(0.5 * h, a.au);
    s.vt.axpy(0.5 * h, a.av);
    s.u.axpy(h, s.ut);
    s.v.axpy(h, s.vt);
    s.set_time(s.time + h);
    State p = s;
    p.ut.axpy(0.5 * h, a.au);
    p.vt.axpy(0.5 * h, a.av);
    predicted.push_back(std::move(p));
  }
  cached_ = accel(predicted);
  for (std::size_t c = 0; c < sys.size(); ++c) {
    sys[c].ut.axpy(0.5 * h, (*cached_)[c].au);
    sys[c].vt.axpy(0.5 * h, (*cached_)[c].av);
  }
}

void Stepper::step_rk4(std::vector<State>& sys) {
  cached_.reset();
  const double h = dt_;
  const std::size_t m = sys.size();
  // Derivative of (u, ut, v, vt) is (ut, au, vt, av).
  auto deriv = [&](const std::vector<State>& y) {
    const auto a = accel(y);
    std::vector<State> d;
    d.reserve(m);
    for (std::size_t c = 0; c < m; ++c) d.push_back(State{y[c].ut, a[c].au, y[c].vt, a[c].av, y[c].time});
    return d;
  };
  auto shifted = [&](const std::vector<State>& k, double w) {
    std::vector<State> y = sys;
    for (std::size_t c = 0; c < m; ++c) {
      y[c].axpy(w, k[c]);
      y[c].set_time(sys[c].time + w);
    }
    return y;
  };
  const auto k1 = deriv(sys);
  const auto k2 = deriv(shifted(k1, 0.5 * h));
  const auto k3 = deriv(shifted(k2, 0.5 * h));
  const auto k4 = deriv(shifted(k3, h));
  for (std::size_t c = 0; c < m; ++c) {
    sys[c].axpy(h / 6.0, k1[c]);
    sys[c].axpy(h / 3.0, k2[c]);
    sys[c].axpy(h / 3.0, k3[c]);
    sys[c].axpy(h / 6.0, k4[c]);
    sys[c].set_time(sys[c].time + h);
  }
}

State step(const State& s, const EvolutionConfig& cfg) {
  Stepper st(cfg.scheme, s.grid().dt, nonlinear_sources(cfg.spec, cfg.cutoff()));
  std::vector<State> sys{s};
  st.step(sys);
  if (!sys[0].all_finite()) throw std::runtime_error("step: blow-up (non-finite values)");
  return sys[0];
}

const char* name(RunStatus s) {
  switch (s) {
    case RunStatus::horizon: return "horizon";
    case RunStatus::field_blowup: return "field-blowup";
    case RunStatus::b_integral_cap: return "B-integral-cap";
  }
  return "?";
}

BlowupDetector::BlowupDetector(double initial_max, double factor, double b_cap)
    : threshold_(initial_max > 0.0 ? factor * initial_max : std::numeric_limits<double>::infinity()),
      b_cap_(b_cap) {}

std::optional<RunStatus> BlowupDetector::check(double, bool finite, double max_field) {
  if (!finite || !std::isfinite(max_field) || max_field > threshold_) return RunStatus::field_blowup;
  return std::nullopt;
}

std::optional<RunStatus> BlowupDetector::add_B(double t, double B) {
  if (!std::isfinite(B)) return RunStatus::field_blowup;
  if (have_B_) b_integral_ += 0.5 * (t - last_t_) * (B + last_B_);
  have_B_ = true;
  last_t_ = t;
  last_B_ = B;
  if (b_integral_ > b_cap_) return RunStatus::b_integral_cap;
  return std::nullopt;
}

namespace {

long step_count(double horizon, double dt) {
  const double q = horizon / dt;
  const long r = std::lround(q);
  if (std::abs(q - r) < 1e-9 * std::max(1.0, q)) return r;
  return static_cast<long>(std::ceil(q));
}

}  // namespace

Trajectory evolve(const State& data, const EvolutionConfig& cfg, const std::vector<Observer>& observers,
                  const std::vector<Observer>& step_observers) {
  cfg.validate();
  data.validate();
  const double dt = data.grid().dt;
  Trajectory traj;
  traj.dt = dt;
  traj.last_healthy_time = data.time;
  const long nsteps = step_count(cfg.horizon, dt);
  const bool track_B = std::isfinite(cfg.b_integral_cap);
  BlowupDetector detector(data.max_abs(), cfg.blowup_factor, cfg.b_integral_cap);

  auto at_stride = [&](const State& s) -> std::optional<RunStatus> {
    if (cfg.keep_snapshots) traj.snapshots.push_back(s);
    for (const auto& obs : observers) obs(s);
    if (track_B) return detector.add_B(s.time, control_B(s, cfg.spec, cfg.cutoff()));
    return std::nullopt;
  };

  for (const auto& obs : step_observers) obs(data);
  if (auto st = at_stride(data)) {
    traj.status = *st;
    return traj;
  }
  Stepper stepper(cfg.scheme, dt, nonlinear_sources(cfg.spec, cfg.cutoff()));
  std::vector<State> sys{data};
  for (long n = 1; n <= nsteps; ++n) {
    stepper.step(sys);
    traj.steps = n;
    const State& s = sys[0];
    if (auto st = detector.check(s.time, s.all_finite(), s.max_abs())) {
      traj.status = *st;
      return traj;
    }
    traj.last_healthy_time = s.time;
    for (const auto& obs : step_observers) obs(s);
    if (n % cfg.snapshot_stride == 0 || n == nsteps) {
      if (auto st = at_stride(s)) {
        traj.status = *st;
        return traj;
      }
    }
  }
  return traj;
}

LinearizedTrajectory evolve_linearized(const State& background, const State& uv, const EvolutionConfig& cfg,
                                       const std::vector<PairObserver>& observers, ExternalSourceFn external) {
  cfg.validate();
  background.validate();
  uv.validate();
  if (!background.grid().same_layout(uv.grid())) throw GridError("evolve_linearized: different grids");
  const double dt = background.grid().dt;
  const auto cutoff = cfg.cutoff();
  const NullFormSpec spec = cfg.spec;
  SourceFn src = [spec, cutoff, external](const std::vector<State>& sys) {
    const double chi = cutoff ? cutoff->value(sys[0].time) : 1.0;
    std::vector<Sources> out;
    Sources bg = rhs(sys[0], spec);
    Sources lin = linearized_rhs(sys[0], sys[1], spec);
    if (chi != 1.0) {
      bg.fu *= chi;
      bg.fv *= chi;
      lin.fu *= chi;
      lin.fv *= chi;
    }
    if (external) {
      Sources e = external(sys[0], sys[1]);
      lin.fu += e.fu;
      lin.fv += e.fv;
    }
    out.push_back(std::move(bg));
    out.push_back(std::move(lin));
    return out;
  };
  LinearizedTrajectory traj;
  traj.last_healthy_time = background.time;
  BlowupDetector detector(std::max(background.max_abs(), uv.max_abs()), cfg.blowup_factor, cfg.b_integral_cap);
  std::vector<State> sys{background, uv};
  for (const auto& obs : observers) obs(sys[0], sys[1]);
  Stepper stepper(cfg.scheme, dt, src);
  const long nsteps = step_count(cfg.horizon, dt);
  for (long n = 1; n <= nsteps; ++n) {
    stepper.step(sys);
    traj.steps = n;
    const bool finite = sys[0].all_finite() && sys[1].all_finite();
    if (auto st = detector.check(sys[0].time, finite, std::max(sys[0].max_abs(), sys[1].max_abs()))) {
      traj.status = *st;
      return traj;
    }
    traj.last_healthy_time = sys[0].time;
    if (n % cfg.snapshot_stride == 0 || n == nsteps)
      for (const auto& obs : observers) obs(sys[0], sys[1]);
  }
  return traj;
}

double h0_norm(const State& s) { return std::sqrt(energy_E(s)); }

double h0_distance(const State& a, const State& b) {
  State d = a;
  d.axpy(-1.0, b);
  return h0_norm(d);
}

PicardResult picard_solve(const State& data, double T0, const NullFormSpec& spec, double tol, int m_max,
                          Scheme scheme) {
  if (!(T0 > 0.0)) throw std::invalid_argument("picard_solve: T0 must be > 0");
  if (m_max < 0) throw std::invalid_argument("picard_solve: m_max must be >= 0");
  data.validate();
  const double dt = data.grid().dt;
  const long nsteps = step_count(T0, dt);
  PicardResult res;
  std::vector<State> prev;  // iterate m - 1; empty means identically zero
  // Every state the stepper evaluates sources on, in call order; iterate m freezes its
  // coefficients at the matching stage of iterate m - 1.
  std::vector<State> prev_stages;
  for (int m = 0; m <= m_max; ++m) {
    std::vector<State> stages;
    std::size_t call = 0;
    SourceFn src = [&](const std::vector<State>& sys) {
      stages.push_back(sys[0]);
      if (prev_stages.empty()) return std::vector<Sources>{Sources{ScalarField(sys[0].grid(), sys[0].time),
                                                                    ScalarField(sys[0].grid(), sys[0].time)}};
      return std::vector<Sources>{sources_mixed(spec, prev_stages.at(call++), sys[0])};
    };
    Stepper stepper(scheme, dt, src);
    std::vector<State> cur{data};
    std::vector<State> sys{data};
    for (long n = 1; n <= nsteps; ++n) {
      stepper.step(sys);
      if (!sys[0].all_finite()) throw std::runtime_error("picard_solve: non-finite iterate");
      cur.push_back(sys[0]);
    }
    prev_stages = std::move(stages);
    double diff = 0.0;
    for (std::size_t n = 0; n < cur.size(); ++n)
      diff = std::max(diff, prev.empty() ? h0_norm(cur[n]) : h0_distance(cur[n], prev[n]));
    res.diff_norms.push_back(diff);
    prev = std::move(cur);
    if (spec.is_zero() || (m >= 1 && diff < tol)) {
      res.converged = true;
      break;
    }
  }
  res.solution = std::move(prev);
  return res;
}

}  // namespace wkg

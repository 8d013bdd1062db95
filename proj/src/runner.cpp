#include "wkg/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <random>

#include "wkg/io.hpp"
#include "wkg/poly.hpp"
#include "wkg/regions.hpp"

namespace wkg {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_output_dir(const std::string& dir) {
  const fs::path p(dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) return fs::path(root) / p;
  return p;
}

namespace {

std::vector<double> default_region_T(double horizon) {
  std::vector<double> Ts;
  for (double T = 1.0; 1.5 * T <= horizon + 1e-9; T *= 2.0) Ts.push_back(T);
  return Ts;
}

json coeffs_json(const FormCoeffs& c) { return json::array({c[0], c[1], c[2], c[3]}); }

json config_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"n", c.grid.n}, {"half_width", c.grid.half_width}, {"dt", c.grid.dt},
               {"cfl", c.cfl}, {"stencil_order", c.grid.stencil_order}};
  json ev = {{"scheme", c.evolution.scheme == Scheme::leapfrog ? "leapfrog" : "rk4"},
             {"horizon", c.evolution.horizon},
             {"snapshot_stride", c.evolution.snapshot_stride},
             {"n1", coeffs_json(c.evolution.spec.n1)},
             {"n2", coeffs_json(c.evolution.spec.n2)},
             {"blowup_factor", c.evolution.blowup_factor}};
  ev["truncation_T0"] = c.evolution.truncation_T0 ? json(*c.evolution.truncation_T0) : json(nullptr);
  ev["b_integral_cap"] = std::isfinite(c.evolution.b_integral_cap) ? json(c.evolution.b_integral_cap) : json(nullptr);
  j["evolution"] = ev;
  j["data"] = {{"shape", name(c.data.shape)},
               {"amplitude", c.data.amplitude},
               {"center", {c.data.center_x1, c.data.center_x2}},
               {"width", c.data.width},
               {"radius", c.data.radius},
               {"weights", {c.data.w_u0, c.data.w_u1, c.data.w_v0, c.data.w_v1}}};
  j["diagnostics"] = {{"energy", c.diagnostics.energy},  {"regions", c.diagnostics.regions},
                      {"bootstrap", c.diagnostics.bootstrap}, {"evf", c.diagnostics.evf},
                      {"h_eff", c.energy.h},             {"n_max", c.energy.n_max},
                      {"evf_cap", c.energy.evf_cap},     {"ghost_S", c.energy.ghost_S},
                      {"fit_t0", c.fit_t0}};
  j["energy_normalization"] = c.energy.normalization == Normalization::full ? "full" : "half";
  j["bootstrap"] = {{"C", c.bootstrap.C}, {"delta", c.bootstrap.delta}};
  return j;
}

RegionKind parse_kind(const std::string& s) {
  for (auto k : {RegionKind::interior, RegionKind::exterior, RegionKind::shell, RegionKind::outer})
    if (s == name(k)) return k;
  throw std::runtime_error("regions.csv: unknown kind '" + s + "'");
}

json decay_json(const DecayFit& f) {
  json cells = json::array();
  for (const auto& s : f.samples) cells.push_back({s.T, s.S, s.amplitude});
  return {{"a_T", f.a_T}, {"a_S", f.a_S}, {"log_c", f.log_c}, {"r2", f.r2}, {"cells", cells}};
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

json fit_directory(const fs::path& dir, double fit_t0) {
  json out;
  out["schema_version"] = kSchemaVersion;
  if (fs::exists(dir / "regions.csv")) {
    const CsvTable t = read_csv(dir / "regions.csv");
    std::vector<RegionSample> rows;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      RegionSample r;
      r.t = t.number(k, "t");
      r.id.T = t.number(k, "T");
      r.id.S = t.number(k, "S");
      r.id.kind = parse_kind(t.rows[k][t.column("kind")]);
      r.cells = static_cast<long>(t.number(k, "cells"));
      r.sup_du = t.number(k, "sup_du");
      r.sup_v = t.number(k, "sup_v");
      r.sup_dv = t.number(k, "sup_dv");
      r.sup_Zu = t.number(k, "sup_Zu");
      rows.push_back(r);
    }
    json decay, in_time;
    for (auto q : {RegionQuantity::du, RegionQuantity::v, RegionQuantity::dv, RegionQuantity::Zu}) {
      try {
        decay[name(q)] = decay_json(decay_fit_regions(rows, q));
      } catch (const std::exception& e) {
        decay[name(q)] = {{"error", e.what()}};
      }
      // Global sup at each sampled time against t.
      std::map<double, double> sup;
      for (const auto& r : rows) sup[r.t] = std::max(sup[r.t], value(r, q));
      std::vector<double> ts, vs;
      for (const auto& [tt, v] : sup)
        if (tt > 0.0 && v > 0.0) {
          ts.push_back(tt);
          vs.push_back(v);
        }
      try {
        const PowerFit p = power_fit(ts, vs);
        in_time[name(q)] = {{"exponent", p.exponent}, {"log_c", p.log_c}, {"r2", p.r2}, {"times", ts}};
      } catch (const std::exception& e) {
        in_time[name(q)] = {{"error", e.what()}};
      }
    }
    out["decay"] = decay;
    out["sup_in_time"] = in_time;
  }
  if (fs::exists(dir / "energy.csv")) {
    const CsvTable t = read_csv(dir / "energy.csv");
    const bool has_evf = std::find(t.header.begin(), t.header.end(), "Evf") != t.header.end();
    const std::string col = has_evf ? "Evf" : "E";
    std::vector<TimeValue> series;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      const double tt = t.number(k, "time"), v = t.number(k, col);
      if (tt >= fit_t0 && v > 0.0) series.push_back({tt, v});
    }
    try {
      out["growth"] = {{"series", col}, {"t0", fit_t0}, {"p", growth_exponent(series)}};
    } catch (const std::exception& e) {
      out["growth"] = {{"series", col}, {"t0", fit_t0}, {"error", e.what()}};
    }
  }
  write_json(dir / "fit.json", out);
  return out;
}

RunOutcome run_simulation(const RunConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);
  const State data = initial_data(cfg.grid, cfg.data);
  RunOutcome outcome;
  outcome.smallness = smallness_norm(data, cfg.energy.h);

  EnergyOptions eo = cfg.energy;
  eo.cutoff = cfg.evolution.cutoff();
  eo.with_evf = cfg.diagnostics.evf;

  std::optional<CsvWriter> energy_csv, region_csv;
  if (cfg.diagnostics.energy) energy_csv.emplace(out_dir / "energy.csv", report_columns(eo));
  if (cfg.diagnostics.regions) region_csv.emplace(out_dir / "regions.csv", region_columns());
  std::vector<double> Ts = cfg.region_T.empty() ? default_region_T(cfg.evolution.horizon) : cfg.region_T;
  std::sort(Ts.begin(), Ts.end());
  std::size_t next_T = 0;

  BootstrapConfig bc = cfg.bootstrap;
  // Thresholds scale with the data norm, not the raw amplitude.
  bc.eps = outcome.smallness;
  BootstrapMonitor monitor(bc, cfg.evolution.spec, cfg.evolution.cutoff());

  std::vector<Observer> observers, step_observers;
  if (energy_csv)
    observers.push_back([&](const State& s) { energy_csv->row(report_row(make_report(s, cfg.evolution.spec, eo))); });
  // Region rows are buffered so that window integrals finishing later can be attached.
  std::vector<RegionSample> region_rows;
  std::map<double, XTAccumulator> xt;
  if (region_csv) {
    step_observers.push_back([&](const State& s) {
      if (next_T >= Ts.size() || s.time < 1.5 * Ts[next_T] - 1e-9) return;
      while (next_T < Ts.size() && s.time >= 1.5 * Ts[next_T] - 1e-9) ++next_T;
      for (const auto& r : sample_regions(s)) region_rows.push_back(r);
    });
    for (double T : Ts) {
      if (2.0 * T > cfg.evolution.horizon + 1e-9) continue;
      std::vector<double> S_list;
      for (double S = 1.0; S <= T; S *= 2.0) S_list.push_back(S);
      xt.emplace(T, XTAccumulator(cfg.grid, T, default_bands(S_list), default_rhos(T), default_r_min(cfg.grid)));
    }
    observers.push_back([&](const State& s) {
      for (auto& [T, acc] : xt)
        if (s.time >= 0.5 * T - 1e-9 && s.time <= 2.0 * T + cfg.grid.dt * cfg.evolution.snapshot_stride) acc.feed(s);
    });
  }
  if (cfg.diagnostics.bootstrap) observers.push_back([&](const State& s) { monitor.observe(s); });

  EvolutionConfig ec = cfg.evolution;
  ec.keep_snapshots = false;
  const Trajectory tr = evolve(data, ec, observers, step_observers);
  outcome.status = tr.status;
  outcome.T_star = tr.last_healthy_time;
  outcome.steps = tr.steps;
  energy_csv.reset();
  if (region_csv) {
    std::map<double, XTResult> xt_done;
    for (const auto& [T, acc] : xt) {
      try {
        xt_done.emplace(T, acc.result());
      } catch (const std::invalid_argument&) {
      }
    }
    for (const auto& r : region_rows) {
      double cone = nan(), hyper = nan();
      if (const auto it = xt_done.find(r.id.T); it != xt_done.end()) {
        const auto& bands = xt.at(r.id.T).bands();
        for (std::size_t k = 0; k < bands.size(); ++k) {
          const Band& b = bands[k];
          const bool match = (b.side == ConeSide::both && (r.id.kind == RegionKind::shell || r.id.S == 1.0) &&
                              r.id.kind != RegionKind::outer) ||
                             (b.side == ConeSide::interior && r.id.kind == RegionKind::interior && r.id.S == b.S) ||
                             (b.side == ConeSide::exterior && r.id.kind == RegionKind::exterior && r.id.S == b.S);
          if (match) cone = it->second.cone[k];
        }
        hyper = it->second.hyper_sup;
      }
      region_csv->row_cells({format_number(r.t), format_number(r.id.T), format_number(r.id.S), name(r.id.kind),
                             std::to_string(r.cells), format_number(r.sup_du), format_number(r.sup_v),
                             format_number(r.sup_dv), format_number(r.sup_Zu), format_number(cone),
                             format_number(hyper)});
    }
    region_csv.reset();
    CsvWriter h(out_dir / "hyperboloids.csv", hyperboloid_columns());
    for (const auto& [T, res] : xt_done) {
      const auto rhos = default_rhos(T);
      for (std::size_t k = 0; k < res.hyperboloid.size(); ++k)
        h.row({T, rhos[k], res.hyperboloid[k], res.energy_sup, res.total});
    }
  }

  if (cfg.diagnostics.bootstrap) {
    CsvWriter b(out_dir / "bootstrap.csv", bootstrap_columns());
    for (std::size_t k = 0; k < bc.which.size(); ++k) {
      const BootstrapBound bound = bc.which[k];
      const auto& v = monitor.violations();
      const auto it = std::find_if(v.begin(), v.end(), [&](const Violation& x) { return x.bound == bound; });
      if (it == v.end())
        b.row_cells({name(bound), "", "", "", "", "", format_number(monitor.worst_ratio()[k])});
      else
        b.row_cells({name(bound), format_number(it->t), format_number(it->x1), format_number(it->x2),
                     format_number(it->value), format_number(it->threshold), format_number(monitor.worst_ratio()[k])});
    }
  }

  const json fit = fit_directory(out_dir, cfg.fit_t0);
  outcome.growth_p = fit.contains("growth") && fit["growth"].contains("p") ? fit["growth"]["p"].get<double>() : nan();

  json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["config"] = config_json(cfg);
  meta["smallness_norm"] = outcome.smallness;
  meta["status"] = name(outcome.status);
  meta["T_star"] = outcome.T_star;
  meta["steps"] = outcome.steps;
  json files;
  if (cfg.diagnostics.energy) files["energy.csv"] = report_columns(eo);
  if (cfg.diagnostics.regions) {
    files["regions.csv"] = region_columns();
    files["hyperboloids.csv"] = hyperboloid_columns();
  }
  if (cfg.diagnostics.bootstrap) files["bootstrap.csv"] = bootstrap_columns();
  files["fit.json"] = "decay, sup_in_time, growth";
  meta["files"] = files;
  write_json(out_dir / "metadata.json", meta);
  return outcome;
}

int run_command(const fs::path& config_path, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    log << e.what() << '\n';
    return kExitConfig;
  }
  try {
    const fs::path out = resolve_output_dir(cfg.output_dir);
    const RunOutcome o = run_simulation(cfg, out);
    log << "status " << name(o.status) << " T* " << o.T_star << " steps " << o.steps << " smallness "
        << o.smallness << " -> " << out.string() << '\n';
    return o.status == RunStatus::horizon ? kExitOk : kExitFailure;
  } catch (const ConfigError& e) {
    log << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "run failed: " << e.what() << '\n';
    return kExitFailure;
  }
}

bool VerifyReport::all_zero() const {
  auto ok = [](const IdentityResult& r) { return r.zero; };
  return std::all_of(catalog.begin(), catalog.end(), ok) && std::all_of(extra.begin(), extra.end(), ok);
}

namespace {

void note(IdentityResult& r, const PolyExpr& res) {
  ++r.samples;
  if (!res.is_zero() && r.zero) {
    r.zero = false;
    r.first_failure = res.to_string();
  }
}

}  // namespace

VerifyReport verify_suite(const std::vector<Identity>& catalog, int samples, int degree, unsigned long long seed) {
  VerifyReport rep;
  std::mt19937_64 rng(seed);
  for (const auto& id : catalog) rep.catalog.push_back(check_identity(id, samples, degree, rng));

  // Same-direction plane-wave phases.
  const PolyExpr t = PolyExpr::variable(Var::t), x1 = PolyExpr::variable(Var::x1), x2 = PolyExpr::variable(Var::x2);
  const std::vector<std::pair<Rational, Rational>> dirs{
      {1, 0}, {0, 1}, {Rational(3, 5), Rational(4, 5)}, {Rational(-5, 13), Rational(12, 13)}};
  for (auto f : {FormId::q0, FormId::q01, FormId::q02, FormId::q12}) {
    IdentityResult r{std::string("null ") + name(f) + " plane waves", 0, true, {}};
    for (const auto& [w1, w2] : dirs)
      for (int sgn : {1, -1}) {
        const PolyExpr phase = t - Rational(sgn) * (w1 * x1 + w2 * x2);
        const PolyExpr phi = phase * phase + Rational(2) * phase;
        const PolyExpr psi = phase * phase * phase - phase;
        note(r, apply_form(f, phi, psi));
      }
    rep.extra.push_back(r);
  }

  // Commutation with the wave operator.
  IdentityResult zr{"[Z, box] = 0", 0, true, {}};
  IdentityResult sr{"[S, box] = -2 box", 0, true, {}};
  for (int s = 0; s < samples; ++s) {
    const PolyExpr p = random_poly(rng, degree + 1);
    note(zr, poly_box(poly_omega12(p)) - poly_omega12(poly_box(p)));
    note(zr, poly_box(poly_omega0(p, 1)) - poly_omega0(poly_box(p), 1));
    note(zr, poly_box(poly_omega0(p, 2)) - poly_omega0(poly_box(p), 2));
    note(sr, poly_box(poly_scaling(p)) - poly_scaling(poly_box(p)) - Rational(2) * poly_box(p));
  }
  rep.extra.push_back(zr);
  rep.extra.push_back(sr);

  for (auto chart : {Chart::interior, Chart::exterior}) {
    IdentityResult r{std::string("box in ") + (chart == Chart::interior ? "interior" : "exterior") + " chart", 0,
                     true, {}};
    for (int s = 0; s < samples; ++s) note(r, box_chart_identity(random_poly(rng, degree), chart));
    const PolyExpr quad = t * t - x1 * x1 - x2 * x2;
    for (const auto& pt : chart_sample_points(chart)) {
      ++r.samples;
      if (box_chart_value(quad, chart, pt) != Rational(6) && r.zero) {
        r.zero = false;
        r.first_failure = "box(t^2 - |x|^2) != 6";
      }
    }
    rep.extra.push_back(r);
  }
  return rep;
}

void print_verify(const VerifyReport& r, std::ostream& out) {
  out << "identity,samples,zero_residual\n";
  for (const auto& row : r.catalog) out << row.name << ',' << row.samples << ',' << (row.zero ? "yes" : "NO") << '\n';
  out << "# additional checks\n";
  for (const auto& row : r.extra) out << row.name << ',' << row.samples << ',' << (row.zero ? "yes" : "NO") << '\n';
  for (const auto& row : r.catalog)
    if (!row.zero) out << "FAILED " << row.name << ": residual " << row.first_failure << '\n';
  for (const auto& row : r.extra)
    if (!row.zero) out << "FAILED " << row.name << ": residual " << row.first_failure << '\n';
}

int verify_command(std::ostream& out, bool corrupted) {
  const VerifyReport r = verify_suite(corrupted ? flipped_sign_catalog() : identity_catalog());
  print_verify(r, out);
  return r.all_zero() ? kExitOk : kExitFailure;
}

std::vector<SweepRow> sweep_simulation(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  if (cfg.eps_list.empty()) throw ConfigError("config: sweep.eps is required for a sweep");
  fs::create_directories(out_dir);
  CsvWriter summary(out_dir / "summary.csv", summary_columns());
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
    RunConfig c = cfg;
    c.data.amplitude = cfg.eps_list[k];
    const fs::path sub = out_dir / ("run_" + std::to_string(k));
    try {
      const RunOutcome o = run_simulation(c, sub);
      const SweepRow row{c.data.amplitude, o.T_star, o.status, o.growth_p};
      summary.row_cells({format_number(row.eps), format_number(row.T_star), name(row.reason),
                         format_number(row.growth_p)});
      rows.push_back(row);
    } catch (const std::exception& e) {
      log << "eps " << c.data.amplitude << " failed: " << e.what() << '\n';
      summary.row_cells({format_number(c.data.amplitude), "nan", "error", "nan"});
    }
  }
  return rows;
}

int sweep_command(const fs::path& config_path, std::ostream& log) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (cfg.eps_list.empty()) throw ConfigError("config: sweep.eps is required for a sweep");
  } catch (const std::exception& e) {
    log << e.what() << '\n';
    return kExitConfig;
  }
  const fs::path out = resolve_output_dir(cfg.output_dir);
  const auto rows = sweep_simulation(cfg, out, log);
  for (const auto& r : rows)
    log << "eps " << r.eps << " T* " << r.T_star << " " << name(r.reason) << " p " << r.growth_p << '\n';
  const bool all_ok = rows.size() == cfg.eps_list.size() &&
                      std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.reason == RunStatus::horizon; });
  return all_ok ? kExitOk : kExitFailure;
}

int fit_command(const fs::path& dir, std::ostream& log) {
  try {
    if (!fs::is_directory(dir)) throw std::runtime_error("fit: not a directory: " + dir.string());
    double t0 = 2.0;
    if (fs::exists(dir / "metadata.json")) {
      const json m = read_json(dir / "metadata.json");
      if (m.contains("config")) t0 = m["config"]["diagnostics"].value("fit_t0", 2.0);
    }
    const json j = fit_directory(dir, t0);
    log << j.dump(2) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    log << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace wkg

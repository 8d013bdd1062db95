#include "wkg/energies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wkg {

ScalarField energy_density(const ScalarField& u, const ScalarField& ut, const ScalarField& v, const ScalarField& vt,
                           Normalization norm) {
  const ScalarField u1 = detail::d1(u, 1), u2 = detail::d1(u, 2);
  const ScalarField v1 = detail::d1(v, 1), v2 = detail::d1(v, 2);
  const double c = density_factor(norm);
  ScalarField out(u.grid(), u.time());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = c * (ut[k] * ut[k] + u1[k] * u1[k] + u2[k] * u2[k] + vt[k] * vt[k] + v1[k] * v1[k] + v2[k] * v2[k] +
                  v[k] * v[k]);
  return out;
}

double energy_E(const ScalarField& u, const ScalarField& ut, const ScalarField& v, const ScalarField& vt,
                Normalization norm) {
  return integrate(energy_density(u, ut, v, vt, norm));
}

double energy_E(const State& s, Normalization norm) { return energy_E(s.u, s.ut, s.v, s.vt, norm); }

namespace {

// Sum of E(D^a u, D^a ut, D^a v, D^a vt) over spatial multi-indices |a| <= max_order.
double spatial_derivative_sum(const ScalarField& u, const ScalarField& ut, const ScalarField& v,
                              const ScalarField& vt, int max_order, Normalization norm) {
  double total = 0.0;
  std::array<ScalarField, 4> row{u, ut, v, vt};
  for (int a1 = 0; a1 <= max_order; ++a1) {
    std::array<ScalarField, 4> col = row;
    for (int a2 = 0; a1 + a2 <= max_order; ++a2) {
      total += energy_E(col[0], col[1], col[2], col[3], norm);
      if (a1 + a2 < max_order)
        for (auto& f : col) f = detail::d1(f, 2);
    }
    if (a1 < max_order)
      for (auto& f : row) f = detail::d1(f, 1);
  }
  return total;
}

int closure_depth(const ClosureResult& c) { return static_cast<int>(c.u.size()) - 1; }

}  // namespace

double energy_En(const ClosureResult& c, int n, Normalization norm) {
  if (n < 0) throw std::invalid_argument("energy_En: negative order");
  if (n == 0) return energy_E(c.u[0], c.u[1], c.v[0], c.v[1], norm);
  if (closure_depth(c) < n + 1) throw std::invalid_argument("energy_En: closure depth too small");
  double total = 0.0;
  for (int bt = 0; bt <= n; ++bt)
    total += spatial_derivative_sum(c.u[bt], c.u[bt + 1], c.v[bt], c.v[bt + 1], n - bt, norm);
  return total;
}

double energy_En(const State& s, const NullFormSpec& spec, int n, Normalization norm, std::optional<Cutoff> cutoff) {
  if (n == 0) return energy_E(s, norm);
  if (n + 1 > kDefaultClosureMax) throw std::invalid_argument("energy_En: order exceeds closure cap");
  return energy_En(time_deriv_closure(s, spec, n + 1, kDefaultClosureMax, cutoff), n, norm);
}

int evf_closure_depth(int cap, int h) {
  (void)h;
  return std::max(cap + 1, 2);
}

double energy_Evf(const ClosureResult& c, int cap, int h, Normalization norm) {
  if (cap < 0 || h < 1) throw std::invalid_argument("energy_Evf: bad cap or h");
  if (closure_depth(c) < evf_closure_depth(cap, h)) throw std::invalid_argument("energy_Evf: closure depth too small");
  // Group multi-indices by their Z part; the derivative part is summed directly.
  std::vector<std::vector<ZId>> betas;
  for (const MultiIndex& g : enumerate_multi_indices(cap, h))
    if (g.order() == 0) betas.push_back(g.beta);
  const TimeJet ju = u_jet(c), jv = v_jet(c);
  double total = 0.0;
  for (const auto& beta : betas) {
    TimeJet zu = ju, zv = jv;
    for (auto it = beta.rbegin(); it != beta.rend(); ++it) {
      zu = apply_Z(zu, *it);
      zv = apply_Z(zv, *it);
    }
    const int rest = cap - h * static_cast<int>(beta.size());
    for (int bt = 0; bt <= rest; ++bt)
      total += spatial_derivative_sum(zu.levels[bt], zu.levels[bt + 1], zv.levels[bt], zv.levels[bt + 1], rest - bt,
                                      norm);
  }
  return total;
}

double energy_Evf(const State& s, const NullFormSpec& spec, int cap, int h, Normalization norm,
                  std::optional<Cutoff> cutoff) {
  const int k = evf_closure_depth(cap, h);
  if (k > kDefaultClosureMax) throw std::invalid_argument("energy_Evf: cap exceeds closure cap");
  return energy_Evf(time_deriv_closure(s, spec, k, kDefaultClosureMax, cutoff), cap, h, norm);
}

namespace {

// Symmetric 2x2 coefficient matrix (p11, p12, p22).
std::array<double, 3> principal(FormId f, double wt, double w1, double w2) {
  switch (f) {
    case FormId::q0: return {-w1, -0.5 * w2, 0.0};
    case FormId::q01: return {wt, 0.0, 0.0};
    case FormId::q02: return {0.0, 0.5 * wt, 0.0};
    case FormId::q12: return {-w2, 0.5 * w1, 0.0};
  }
  return {0, 0, 0};
}

double contract(const std::array<double, 3>& p, double U1, double U2, double V1, double V2) {
  return p[0] * U1 * V1 + p[1] * (U1 * V2 + U2 * V1) + p[2] * U2 * V2;
}

}  // namespace

double correction_B(FormId form, const ScalarField& w, const ScalarField& wt, const ScalarField& U,
                    const ScalarField& V) {
  const ScalarField w1 = detail::d1(w, 1), w2 = detail::d1(w, 2);
  const ScalarField U1 = detail::d1(U, 1), U2 = detail::d1(U, 2);
  const ScalarField V1 = detail::d1(V, 1), V2 = detail::d1(V, 2);
  ScalarField dens(w.grid(), w.time());
  for (std::size_t k = 0; k < dens.size(); ++k)
    dens[k] = contract(principal(form, wt[k], w1[k], w2[k]), U1[k], U2[k], V1[k], V2[k]);
  return integrate(dens);
}

ScalarField correction_density(const State& bg, const ScalarField& U, const ScalarField& V,
                               const NullFormSpec& spec) {
  const ScalarField u1 = detail::d1(bg.u, 1), u2 = detail::d1(bg.u, 2);
  const ScalarField v1 = detail::d1(bg.v, 1), v2 = detail::d1(bg.v, 2);
  const ScalarField U1 = detail::d1(U, 1), U2 = detail::d1(U, 2);
  const ScalarField V1 = detail::d1(V, 1), V2 = detail::d1(V, 2);
  ScalarField dens(U.grid(), U.time());
  for (std::size_t k = 0; k < dens.size(); ++k) {
    std::array<double, 3> p{0, 0, 0};
    for (int q = 0; q < 4; ++q) {
      const FormId f = static_cast<FormId>(q);
      const auto pv = principal(f, bg.vt[k], v1[k], v2[k]);
      const auto pu = principal(f, bg.ut[k], u1[k], u2[k]);
      for (int e = 0; e < 3; ++e) p[e] += spec.n1[q] * pv[e] + spec.n2[q] * pu[e];
    }
    dens[k] = contract(p, U1[k], U2[k], V1[k], V2[k]);
  }
  return dens;
}

double energy_quasi(const State& background, const State& uv, const NullFormSpec& spec, Normalization norm) {
  const double base = energy_E(uv, norm);
  if (spec.is_zero()) return base;
  const double kappa = norm == Normalization::full ? 2.0 : 1.0;
  return base + kappa * integrate(correction_density(background, uv.u, uv.v, spec));
}

double GhostProfile::A(double q) const {
  double tau = side == GhostSide::interior ? (q - S) / S : (q + 2.0 * S) / S;
  tau = std::clamp(tau, 0.0, 1.0);
  return a_max * tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau);
}

double GhostProfile::A_prime(double q) const {
  const double tau = side == GhostSide::interior ? (q - S) / S : (q + 2.0 * S) / S;
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  return a_max * 30.0 * tau * tau * (1.0 - tau) * (1.0 - tau) / S;
}

double ghost_weight(double t, double r, const GhostProfile& p) { return std::exp(-p.A(t - r)); }

double ghost_weight(double t, double r, double S) { return ghost_weight(t, r, GhostProfile{S}); }

double energy_ghost(const State& s, const GhostProfile& p, Normalization norm) {
  ScalarField dens = energy_density(s.u, s.ut, s.v, s.vt, norm);
  const GridSpec& g = dens.grid();
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) dens.at(a, b) *= ghost_weight(s.time, std::hypot(g.coord(a), g.coord(b)), p);
  return integrate(dens);
}

double control_A(const State& s) {
  return s.ut.max_abs() + detail::d1(s.u, 1).max_abs() + detail::d1(s.u, 2).max_abs() + s.vt.max_abs() +
         detail::d1(s.v, 1).max_abs() + detail::d1(s.v, 2).max_abs();
}

double control_B(const ClosureResult& c) {
  if (c.u.size() < 3) throw std::invalid_argument("control_B: closure depth too small");
  double total = 0.0;
  for (const auto* jet : {&c.u, &c.v}) {
    const ScalarField& f = (*jet)[0];
    const ScalarField& ft = (*jet)[1];
    const ScalarField f1 = detail::d1(f, 1);
    total += (*jet)[2].max_abs() + detail::d1(ft, 1).max_abs() + detail::d1(ft, 2).max_abs() +
             detail::d2(f, 1).max_abs() + detail::d1(f1, 2).max_abs() + detail::d2(f, 2).max_abs();
  }
  return total;
}

double control_B(const State& s, const NullFormSpec& spec, std::optional<Cutoff> cutoff) {
  return control_B(time_deriv_closure(s, spec, 2, kDefaultClosureMax, cutoff));
}

EnergyReport make_report(const State& s, const NullFormSpec& spec, const EnergyOptions& opt) {
  const int k = std::max({opt.n_max + 1, opt.with_evf ? evf_closure_depth(opt.evf_cap, opt.h) : 2, 2});
  const ClosureResult c = time_deriv_closure(s, spec, k, std::max(k, kDefaultClosureMax), opt.cutoff);
  EnergyReport r;
  r.time = s.time;
  r.E = energy_E(s, opt.normalization);
  for (int n = 1; n <= opt.n_max; ++n) r.En.push_back(energy_En(c, n, opt.normalization));
  if (opt.with_evf) r.Evf = energy_Evf(c, opt.evf_cap, opt.h, opt.normalization);
  for (int d = 0; d < 3; ++d) {
    State uv;
    if (d == 0) {
      uv = State{c.u[1], c.u[2], c.v[1], c.v[2], s.time};
    } else {
      uv = State{detail::d1(s.u, d), detail::d1(s.ut, d), detail::d1(s.v, d), detail::d1(s.vt, d), s.time};
    }
    r.Equasi += energy_quasi(s, uv, spec, opt.normalization);
  }
  for (double S : opt.ghost_S) r.Eghost.push_back(energy_ghost(s, GhostProfile{S}, opt.normalization));
  r.A = control_A(s);
  r.B = control_B(c);
  return r;
}

std::vector<std::string> report_columns(const EnergyOptions& opt) {
  std::vector<std::string> cols{"time", "E"};
  for (int n = 1; n <= opt.n_max; ++n) cols.push_back("E" + std::to_string(n));
  cols.push_back("Evf");
  cols.push_back("Equasi");
  cols.push_back("A");
  cols.push_back("B");
  for (double S : opt.ghost_S) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "Eghost_S%g", S);
    cols.emplace_back(buf);
  }
  return cols;
}

std::vector<double> report_row(const EnergyReport& r) {
  std::vector<double> row{r.time, r.E};
  row.insert(row.end(), r.En.begin(), r.En.end());
  row.push_back(r.Evf);
  row.push_back(r.Equasi);
  row.push_back(r.A);
  row.push_back(r.B);
  row.insert(row.end(), r.Eghost.begin(), r.Eghost.end());
  return row;
}

}  // namespace wkg

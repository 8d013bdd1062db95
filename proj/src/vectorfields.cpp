#include "wkg/vectorfields.hpp"

#include <cmath>
#include <functional>

namespace wkg {

TimeJet TimeJet::from_levels(std::vector<ScalarField> levels) {
  if (levels.empty()) throw VectorFieldError("time jet: no levels");
  TimeJet j;
  j.time = levels.front().time();
  j.levels = std::move(levels);
  return j;
}

TimeJet u_jet(const ClosureResult& c) { return TimeJet::from_levels(c.u); }
TimeJet v_jet(const ClosureResult& c) { return TimeJet::from_levels(c.v); }

namespace {

void require_depth(const TimeJet& j, int need, const char* what) {
  if (j.depth() < need) throw VectorFieldError(std::string(what) + ": time derivative unavailable");
}

// out = t * d_i f + x_i * ft (+ k * d_i fprev when k > 0)
ScalarField boost_level(const ScalarField& f, const ScalarField& ft, const ScalarField* fprev, int k, int i,
                        double t) {
  const GridSpec& g = f.grid();
  ScalarField df = detail::d1(f, i);
  ScalarField dprev = fprev ? detail::d1(*fprev, i) : ScalarField();
  ScalarField out(g, f.time());
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const std::size_t q = g.index(a, b);
      const double xi = i == 1 ? g.coord(a) : g.coord(b);
      double val = t * df[q] + xi * ft[q];
      if (fprev) val += k * dprev[q];
      out[q] = val;
    }
  return out;
}

ScalarField rotation_level(const ScalarField& f) {
  const GridSpec& g = f.grid();
  ScalarField d1f = detail::d1(f, 1), d2f = detail::d1(f, 2);
  ScalarField out(g, f.time());
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const std::size_t q = g.index(a, b);
      out[q] = g.coord(b) * d1f[q] - g.coord(a) * d2f[q];
    }
  return out;
}

ScalarField scaling_level(const ScalarField& f, const ScalarField& ft, int k, double t) {
  const GridSpec& g = f.grid();
  ScalarField d1f = detail::d1(f, 1), d2f = detail::d1(f, 2);
  ScalarField out(g, f.time());
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const std::size_t q = g.index(a, b);
      double val = t * ft[q] + g.coord(a) * d1f[q] + g.coord(b) * d2f[q];
      if (k > 0) val += k * f[q];
      out[q] = val;
    }
  return out;
}

}  // namespace

TimeJet jet_dt(const TimeJet& j) {
  require_depth(j, 1, "jet_dt");
  TimeJet out;
  out.time = j.time;
  out.levels.assign(j.levels.begin() + 1, j.levels.end());
  return out;
}

TimeJet jet_d(const TimeJet& j, int axis) {
  TimeJet out;
  out.time = j.time;
  for (const auto& f : j.levels) out.levels.push_back(detail::d1(f, axis));
  return out;
}

TimeJet apply_Z(const TimeJet& j, ZId which) {
  TimeJet out;
  out.time = j.time;
  if (which == ZId::omega12) {
    for (const auto& f : j.levels) out.levels.push_back(rotation_level(f));
    return out;
  }
  require_depth(j, 1, "apply_Z");
  const int i = which == ZId::omega01 ? 1 : 2;
  for (int k = 0; k < j.depth(); ++k)
    out.levels.push_back(
        boost_level(j.levels[k], j.levels[k + 1], k > 0 ? &j.levels[k - 1] : nullptr, k, i, j.time));
  return out;
}

TimeJet apply_scaling(const TimeJet& j) {
  require_depth(j, 1, "apply_scaling");
  TimeJet out;
  out.time = j.time;
  for (int k = 0; k < j.depth(); ++k) out.levels.push_back(scaling_level(j.levels[k], j.levels[k + 1], k, j.time));
  return out;
}

ScalarField apply_Z(const ScalarField& f, const ScalarField& ft, ZId which) {
  if (which == ZId::omega12) return rotation_level(f);
  if (ft.size() != f.size()) throw VectorFieldError("apply_Z: time derivative unavailable");
  return boost_level(f, ft, nullptr, 0, which == ZId::omega01 ? 1 : 2, f.time());
}

ScalarField apply_scaling(const ScalarField& f, const ScalarField& ft) {
  if (ft.size() != f.size()) throw VectorFieldError("apply_scaling: time derivative unavailable");
  return scaling_level(f, ft, 0, f.time());
}

ScalarField apply_tau(const ScalarField& f, const ScalarField& ft, int j, double r_min) {
  if (ft.size() != f.size()) throw VectorFieldError("apply_tau: time derivative unavailable");
  const GridSpec& g = f.grid();
  ScalarField df = detail::d1(f, j);
  ScalarField out(g, f.time());
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const double x1 = g.coord(a), x2 = g.coord(b);
      const double r = std::hypot(x1, x2);
      if (r < r_min) continue;
      const std::size_t q = g.index(a, b);
      out[q] = df[q] + ((j == 1 ? x1 : x2) / r) * ft[q];
    }
  return out;
}

RegionMask tau_mask(const GridSpec& g, double r_min) {
  RegionMask m = RegionMask::none(g);
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) m.bits[g.index(a, b)] = std::hypot(g.coord(a), g.coord(b)) >= r_min;
  return m;
}

int MultiIndex::time_depth() const {
  int d = alpha[0];
  for (ZId z : beta)
    if (z != ZId::omega12) ++d;
  return d;
}

std::string MultiIndex::to_string() const {
  std::string s = "d(" + std::to_string(alpha[0]) + "," + std::to_string(alpha[1]) + "," +
                  std::to_string(alpha[2]) + ")";
  for (ZId z : beta) s += std::string(" ") + name(z);
  return s;
}

TimeJet apply_Zgamma(const TimeJet& j, const MultiIndex& g, int cap) {
  if (g.weight() > cap) throw VectorFieldError("apply_Zgamma: weight exceeds cap");
  require_depth(j, g.time_depth(), "apply_Zgamma");
  TimeJet out = j;
  for (auto it = g.beta.rbegin(); it != g.beta.rend(); ++it) out = apply_Z(out, *it);
  for (int k = 0; k < g.alpha[0]; ++k) out = jet_dt(out);
  for (int k = 0; k < g.alpha[1]; ++k) out = jet_d(out, 1);
  for (int k = 0; k < g.alpha[2]; ++k) out = jet_d(out, 2);
  return out;
}

std::vector<MultiIndex> enumerate_multi_indices(int cap, int h, int max_beta) {
  std::vector<MultiIndex> out;
  std::vector<std::vector<ZId>> betas{{}};
  const ZId all[3] = {ZId::omega12, ZId::omega01, ZId::omega02};
  std::function<void(std::vector<ZId>&, int)> grow = [&](std::vector<ZId>& cur, int start) {
    if (static_cast<int>(cur.size()) == max_beta) return;
    for (int z = start; z < 3; ++z) {
      cur.push_back(all[z]);
      betas.push_back(cur);
      grow(cur, z);
      cur.pop_back();
    }
  };
  std::vector<ZId> cur;
  grow(cur, 0);
  for (const auto& beta : betas) {
    const int rest = cap - h * static_cast<int>(beta.size());
    if (rest < 0) continue;
    for (int n = 0; n <= rest; ++n)
      for (int a0 = n; a0 >= 0; --a0)
        for (int a1 = n - a0; a1 >= 0; --a1) out.push_back(MultiIndex{{a0, a1, n - a0 - a1}, beta, h});
  }
  return out;
}

ScalarField zt_relation_residual(const ScalarField& f, const ScalarField& ft, int j, double r_min) {
  const ScalarField z = apply_Z(f, ft, j == 1 ? ZId::omega01 : ZId::omega02);
  const ScalarField tau = apply_tau(f, ft, j, r_min);
  const GridSpec& g = f.grid();
  const double t = f.time();
  ScalarField out(g, t);
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      const double x1 = g.coord(a), x2 = g.coord(b);
      const double r = std::hypot(x1, x2);
      if (r < r_min) continue;
      const std::size_t q = g.index(a, b);
      out[q] = z[q] - (t * tau[q] - (t - r) * ((j == 1 ? x1 : x2) / r) * ft[q]);
    }
  return out;
}

}  // namespace wkg

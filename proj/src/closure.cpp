#include "wkg/closure.hpp"

#include <cmath>
#include <stdexcept>

namespace wkg {

double Cutoff::derivative(double t, int k) const {
  const double tau = (t - T0) / T0;
  if (tau <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (tau >= 1.0) return 0.0;
  // s(tau) = 10 tau^3 - 15 tau^4 + 6 tau^5, chi = 1 - s
  double ds = 0.0;
  switch (k) {
    case 0: return 1.0 - tau * tau * tau * (10.0 - 15.0 * tau + 6.0 * tau * tau);
    case 1: ds = 30.0 * tau * tau - 60.0 * tau * tau * tau + 30.0 * std::pow(tau, 4); break;
    case 2: ds = 60.0 * tau - 180.0 * tau * tau + 120.0 * tau * tau * tau; break;
    case 3: ds = 60.0 - 360.0 * tau + 360.0 * tau * tau; break;
    case 4: ds = -360.0 + 720.0 * tau; break;
    case 5: ds = 720.0; break;
    default: ds = 0.0;
  }
  return -ds / std::pow(T0, k);
}

Grad<ScalarField> coefficient_grad(const ScalarField& w, const ScalarField& wt) {
  return {wt, detail::d1(w, 1), detail::d1(w, 2)};
}

Grad<ScalarField> target_grad(const ScalarField& b, const ScalarField& bt) {
  ScalarField b1 = detail::d1(b, 1);
  return {detail::d1(bt, 1), detail::d2(b, 1), detail::d1(b1, 2)};
}

Sources sources_mixed(const NullFormSpec& spec, const State& coeff, const State& target) {
  const GridSpec& g = target.u.grid();
  Sources out{ScalarField(g, target.time), ScalarField(g, target.time)};
  if (spec.is_zero()) return out;
  const auto cu = coefficient_grad(coeff.u, coeff.ut);
  const auto cv = coefficient_grad(coeff.v, coeff.vt);
  const auto tu = target_grad(target.u, target.ut);
  const auto tv = target_grad(target.v, target.vt);
  accumulate_N(out.fu, 1.0, spec.n1, cv, tv);
  accumulate_N(out.fu, 1.0, spec.n2, cu, tv);
  accumulate_N(out.fv, 1.0, spec.n1, cv, tu);
  accumulate_N(out.fv, 1.0, spec.n2, cu, tu);
  return out;
}

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

ClosureResult time_deriv_closure(const State& s, const NullFormSpec& spec, int k, int k_max,
                                 std::optional<Cutoff> cutoff) {
  if (k < 2 || k > k_max) throw std::invalid_argument("time_deriv_closure: k outside [2, k_max]");
  const GridSpec& g = s.u.grid();
  ClosureResult out;
  out.u = {s.u, s.ut};
  out.v = {s.v, s.vt};
  const bool nonlinear = !spec.is_zero();

  std::vector<std::optional<Grad<ScalarField>>> cu(k), cv(k), tu(k), tv(k);
  auto cgrad = [&](std::vector<std::optional<Grad<ScalarField>>>& cache, const std::vector<ScalarField>& jet, int p)
      -> const Grad<ScalarField>& {
    if (!cache[p]) cache[p] = coefficient_grad(jet[p], jet[p + 1]);
    return *cache[p];
  };
  auto tgrad = [&](std::vector<std::optional<Grad<ScalarField>>>& cache, const std::vector<ScalarField>& jet, int p)
      -> const Grad<ScalarField>& {
    if (!cache[p]) cache[p] = target_grad(jet[p], jet[p + 1]);
    return *cache[p];
  };

  std::vector<ScalarField> gu, gv;  // gu[m] = d_t^m of the untruncated u source
  for (int level = 2; level <= k; ++level) {
    const int j = level - 2;
    ScalarField nu = detail::lap(out.u[j]);
    ScalarField nv = detail::lap(out.v[j]);
    nv -= out.v[j];
    if (nonlinear) {
      const int m = j;
      ScalarField su(g, s.time), sv(g, s.time);
      for (int p = 0; p <= m; ++p) {
        const double b = binomial(m, p);
        accumulate_N(su, b, spec.n1, cgrad(cv, out.v, p), tgrad(tv, out.v, m - p));
        accumulate_N(su, b, spec.n2, cgrad(cu, out.u, p), tgrad(tv, out.v, m - p));
        accumulate_N(sv, b, spec.n1, cgrad(cv, out.v, p), tgrad(tu, out.u, m - p));
        accumulate_N(sv, b, spec.n2, cgrad(cu, out.u, p), tgrad(tu, out.u, m - p));
      }
      gu.push_back(std::move(su));
      gv.push_back(std::move(sv));
      for (int i = 0; i <= j; ++i) {
        const double w = binomial(j, i) * (cutoff ? cutoff->derivative(s.time, i) : (i == 0 ? 1.0 : 0.0));
        if (w == 0.0) continue;
        nu.axpy(w, gu[j - i]);
        nv.axpy(w, gv[j - i]);
      }
    }
    out.u.push_back(std::move(nu));
    out.v.push_back(std::move(nv));
  }
  return out;
}

}  // namespace wkg

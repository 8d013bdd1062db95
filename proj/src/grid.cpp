#include "wkg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wkg {

void GridSpec::validate(double cfl_max) const {
  if (n < 16) throw GridError("grid: n must be at least 16");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw GridError("grid: half_width must be positive");
  if (stencil_order != 2 && stencil_order != 4) throw GridError("grid: stencil_order must be 2 or 4");
  if (cfl_max > 0.5) throw GridError("grid: cfl factor above 0.5");
  if (!(dt > 0.0) || dt > cfl_max * dx() * (1.0 + 1e-12))
    throw GridError("grid: dt=" + std::to_string(dt) + " violates dt <= " + std::to_string(cfl_max) + " dx");
}

GridSpec GridSpec::with_cfl(int n, double half_width, double cfl, int stencil_order) {
  GridSpec g{n, half_width, 0.0, stencil_order};
  g.dt = cfl * g.dx();
  return g;
}

ScalarField::ScalarField(const GridSpec& grid, double time)
    : grid_(grid), values_(grid.size(), 0.0), time_(time) {}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.size()) throw GridError("field: value count does not match grid");
}

ScalarField ScalarField::constant(const GridSpec& grid, double c, double time) {
  return ScalarField(grid, std::vector<double>(grid.size(), c), time);
}

ScalarField ScalarField::from_function(const GridSpec& grid, double time,
                                       const std::function<double(double, double)>& f) {
  ScalarField out(grid, time);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) out.at(i, j) = f(grid.coord(i), grid.coord(j));
  return out;
}

ScalarField ScalarField::coordinate(const GridSpec& grid, int axis, double time) {
  return from_function(grid, time, [axis](double x1, double x2) { return axis == 1 ? x1 : x2; });
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

void ScalarField::require_finite(const char* what) const {
  if (!all_finite()) throw GridError(std::string(what) + ": non-finite input");
}

void ScalarField::check_same(const ScalarField& o) const {
  if (!grid_.same_layout(o.grid_) || values_.size() != o.values_.size())
    throw GridError("field: mismatched grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  check_same(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  check_same(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  check_same(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (double& x : values_) x *= c;
  return *this;
}

ScalarField& ScalarField::axpy(double c, const ScalarField& o) {
  check_same(o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += c * o.values_[k];
  return *this;
}

State State::zero(const GridSpec& grid, double time) {
  return State{ScalarField(grid, time), ScalarField(grid, time), ScalarField(grid, time),
               ScalarField(grid, time), time};
}

void State::set_time(double t) {
  time = t;
  u.set_time(t);
  ut.set_time(t);
  v.set_time(t);
  vt.set_time(t);
}

bool State::all_finite() const { return u.all_finite() && ut.all_finite() && v.all_finite() && vt.all_finite(); }

double State::max_abs() const {
  return std::max({u.max_abs(), ut.max_abs(), v.max_abs(), vt.max_abs()});
}

void State::validate() const {
  const GridSpec& g = u.grid();
  for (const ScalarField* f : {&ut, &v, &vt}) {
    if (!g.same_layout(f->grid()) || f->size() != u.size()) throw GridError("state: fields on different grids");
    if (f->time() != time) throw GridError("state: fields at different times");
  }
  if (u.time() != time) throw GridError("state: fields at different times");
  if (!all_finite()) throw GridError("state: non-finite values");
}

State& State::axpy(double c, const State& o) {
  u.axpy(c, o.u);
  ut.axpy(c, o.ut);
  v.axpy(c, o.v);
  vt.axpy(c, o.vt);
  return *this;
}

State& State::operator*=(double c) {
  u *= c;
  ut *= c;
  v *= c;
  vt *= c;
  return *this;
}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

RegionMask& RegionMask::operator|=(const RegionMask& o) {
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = bits[k] | o.bits[k];
  return *this;
}

RegionMask& RegionMask::operator&=(const RegionMask& o) {
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = bits[k] & o.bits[k];
  return *this;
}

namespace detail {

namespace {

// Applies a symmetric/antisymmetric 5-point stencil along one axis with periodic wrap.
// w[0..2] are weights for offsets 0, 1, 2; sign = -1 for odd (first derivative) stencils.
void apply_stencil(const GridSpec& g, std::span<const double> f, std::span<double> out, int axis,
                   const double w[3], double sign) {
  const int n = g.n;
  const bool wide = g.stencil_order == 4;
  if (axis == 1) {
    for (int j = 0; j < n; ++j) {
      const double* row = f.data() + static_cast<std::size_t>(j) * n;
      double* orow = out.data() + static_cast<std::size_t>(j) * n;
      for (int i = 0; i < n; ++i) {
        const int ip = i + 1 < n ? i + 1 : i + 1 - n;
        const int im = i >= 1 ? i - 1 : i - 1 + n;
        double s = w[0] * row[i] + w[1] * (row[ip] + sign * row[im]);
        if (wide) {
          const int ip2 = i + 2 < n ? i + 2 : i + 2 - n;
          const int im2 = i >= 2 ? i - 2 : i - 2 + n;
          s += w[2] * (row[ip2] + sign * row[im2]);
        }
        orow[i] = s;
      }
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const int jp = j + 1 < n ? j + 1 : j + 1 - n;
      const int jm = j >= 1 ? j - 1 : j - 1 + n;
      const int jp2 = j + 2 < n ? j + 2 : j + 2 - n;
      const int jm2 = j >= 2 ? j - 2 : j - 2 + n;
      const double* r0 = f.data() + static_cast<std::size_t>(j) * n;
      const double* rp = f.data() + static_cast<std::size_t>(jp) * n;
      const double* rm = f.data() + static_cast<std::size_t>(jm) * n;
      const double* rp2 = f.data() + static_cast<std::size_t>(jp2) * n;
      const double* rm2 = f.data() + static_cast<std::size_t>(jm2) * n;
      double* orow = out.data() + static_cast<std::size_t>(j) * n;
      if (wide) {
        for (int i = 0; i < n; ++i)
          orow[i] = w[0] * r0[i] + w[1] * (rp[i] + sign * rm[i]) + w[2] * (rp2[i] + sign * rm2[i]);
      } else {
        for (int i = 0; i < n; ++i) orow[i] = w[0] * r0[i] + w[1] * (rp[i] + sign * rm[i]);
      }
    }
  }
}

}  // namespace

void deriv1(const GridSpec& g, std::span<const double> f, std::span<double> out, int axis) {
  const double h = g.dx();
  if (g.stencil_order == 4) {
    const double w[3] = {0.0, 8.0 / (12.0 * h), -1.0 / (12.0 * h)};
    apply_stencil(g, f, out, axis, w, -1.0);
  } else {
    const double w[3] = {0.0, 1.0 / (2.0 * h), 0.0};
    apply_stencil(g, f, out, axis, w, -1.0);
  }
}

void deriv2(const GridSpec& g, std::span<const double> f, std::span<double> out, int axis) {
  const double h2 = g.dx() * g.dx();
  if (g.stencil_order == 4) {
    const double w[3] = {-30.0 / (12.0 * h2), 16.0 / (12.0 * h2), -1.0 / (12.0 * h2)};
    apply_stencil(g, f, out, axis, w, 1.0);
  } else {
    const double w[3] = {-2.0 / h2, 1.0 / h2, 0.0};
    apply_stencil(g, f, out, axis, w, 1.0);
  }
}

void laplacian(const GridSpec& g, std::span<const double> f, std::span<double> out) {
  std::vector<double> tmp(f.size());
  deriv2(g, f, out, 1);
  deriv2(g, f, tmp, 2);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += tmp[k];
}

ScalarField d1(const ScalarField& f, int axis) {
  ScalarField out(f.grid(), f.time());
  deriv1(f.grid(), f.values(), out.values(), axis);
  return out;
}

ScalarField d2(const ScalarField& f, int axis) {
  ScalarField out(f.grid(), f.time());
  deriv2(f.grid(), f.values(), out.values(), axis);
  return out;
}

ScalarField lap(const ScalarField& f) {
  ScalarField out(f.grid(), f.time());
  laplacian(f.grid(), f.values(), out.values());
  return out;
}

}  // namespace detail

ScalarField dx_deriv(const ScalarField& f, int axis, int order) {
  if (axis != 1 && axis != 2) throw GridError("dx_deriv: axis must be 1 or 2");
  if (order != 1 && order != 2) throw GridError("dx_deriv: order must be 1 or 2");
  f.require_finite("dx_deriv");
  return order == 1 ? detail::d1(f, axis) : detail::d2(f, axis);
}

ScalarField laplacian(const ScalarField& f) {
  f.require_finite("laplacian");
  return detail::lap(f);
}

ScalarField spatial_deriv(const ScalarField& f, int a1, int a2) {
  if (a1 < 0 || a2 < 0) throw GridError("spatial_deriv: negative count");
  f.require_finite("spatial_deriv");
  ScalarField out = f;
  for (int k = 0; a1 - k >= 2; k += 2) out = detail::d2(out, 1);
  if (a1 % 2) out = detail::d1(out, 1);
  for (int k = 0; a2 - k >= 2; k += 2) out = detail::d2(out, 2);
  if (a2 % 2) out = detail::d1(out, 2);
  return out;
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double x : f.values()) s += x;
  const double h = f.grid().dx();
  return s * h * h;
}

double integrate(const ScalarField& f, const RegionMask& mask) {
  if (mask.bits.size() != f.size() || !mask.grid.same_layout(f.grid()))
    throw GridError("integrate: mask shape does not match grid");
  double s = 0.0;
  auto vals = f.values();
  for (std::size_t k = 0; k < vals.size(); ++k)
    if (mask.bits[k]) s += vals[k];
  const double h = f.grid().dx();
  return s * h * h;
}

}  // namespace wkg

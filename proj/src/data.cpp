#include "wkg/data.hpp"

#include <cmath>
#include <stdexcept>

#include "wkg/energies.hpp"

namespace wkg {

void DataProfile::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("data: amplitude must be >= 0");
  if (!(width > 0.0)) throw std::invalid_argument("data: width must be > 0");
  if (!(radius >= 0.0)) throw std::invalid_argument("data: radius must be >= 0");
}

double DataProfile::profile(double x1, double x2) const {
  const double r = std::hypot(x1 - center_x1, x2 - center_x2);
  if (shape == DataShape::gaussian) return std::exp(-r * r / (width * width));
  const double s = (r - radius) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double DataProfile::support_radius() const {
  const double c = std::hypot(center_x1, center_x2);
  if (shape == DataShape::gaussian) return c + 6.0 * width;
  return c + radius + width;
}

DataShape parse_shape(const std::string& s) {
  if (s == "gaussian") return DataShape::gaussian;
  if (s == "annular-bump" || s == "annular_bump") return DataShape::annular_bump;
  throw std::invalid_argument("data: unknown shape '" + s + "'");
}

const char* name(DataShape s) { return s == DataShape::gaussian ? "gaussian" : "annular-bump"; }

State initial_data(const GridSpec& g, const DataProfile& p) {
  p.validate();
  const ScalarField base = ScalarField::from_function(g, 0.0, [&](double a, double b) { return p.profile(a, b); });
  State s = State::zero(g, 0.0);
  s.u.axpy(p.amplitude * p.w_u0, base);
  s.ut.axpy(p.amplitude * p.w_u1, base);
  s.v.axpy(p.amplitude * p.w_v0, base);
  s.vt.axpy(p.amplitude * p.w_v1, base);
  return s;
}

namespace {

// sum over spatial |a| <= n of E(D^a data), i.e. the squared H^n norm of Cauchy data.
double hn_squared(const std::array<ScalarField, 4>& f, int n) {
  double total = 0.0;
  std::array<ScalarField, 4> row = f;
  for (int a1 = 0; a1 <= n; ++a1) {
    std::array<ScalarField, 4> col = row;
    for (int a2 = 0; a1 + a2 <= n; ++a2) {
      total += energy_E(col[0], col[1], col[2], col[3]);
      if (a1 + a2 < n)
        for (auto& c : col) c = detail::d1(c, 2);
    }
    if (a1 < n)
      for (auto& c : row) c = detail::d1(c, 1);
  }
  return total;
}

ScalarField weighted_derivative(const ScalarField& f, int i, int j) {
  ScalarField d = detail::d1(f, j);
  const ScalarField x = ScalarField::coordinate(f.grid(), i, f.time());
  return d * x;
}

}  // namespace

double smallness_norm(const State& s, int h) {
  const std::array<ScalarField, 4> base{s.u, s.ut, s.v, s.vt};
  double total = std::sqrt(hn_squared(base, 2 * h));
  double first = 0.0, second = 0.0;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      std::array<ScalarField, 4> w;
      for (int k = 0; k < 4; ++k) w[k] = weighted_derivative(base[k], i, j);
      first += hn_squared(w, h);
      for (int k2 = 1; k2 <= 2; ++k2)
        for (int l = 1; l <= 2; ++l) {
          std::array<ScalarField, 4> w2;
          for (int k = 0; k < 4; ++k) w2[k] = weighted_derivative(w[k], k2, l);
          second += hn_squared(w2, 0);
        }
    }
  return total + std::sqrt(first) + std::sqrt(second);
}

}  // namespace wkg

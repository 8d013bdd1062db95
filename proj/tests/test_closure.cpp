#include <doctest.h>

#include <cmath>

#include "wkg/closure.hpp"
#include "wkg/evolution.hpp"

using namespace wkg;

namespace {

GridSpec grid(int n = 64, double L = 8.0) { return GridSpec::with_cfl(n, L, 0.25); }

State gaussian_state(const GridSpec& g, double a) {
  State s = State::zero(g);
  s.u = ScalarField::from_function(g, 0.0, [&](double x, double y) { return a * std::exp(-x * x - y * y); });
  s.ut = ScalarField::from_function(g, 0.0, [&](double x, double y) { return a * x * std::exp(-x * x - y * y); });
  s.v = ScalarField::from_function(g, 0.0, [&](double x, double y) { return a * std::exp(-(x - 1) * (x - 1) - y * y); });
  s.vt = ScalarField::from_function(g, 0.0, [&](double x, double y) { return -a * y * std::exp(-x * x - y * y); });
  return s;
}

NullFormSpec mixed_spec() {
  NullFormSpec s;
  s.n1 = {1.0, 0.5, -0.3, 0.2};
  s.n2 = {-0.4, 0.1, 0.7, -1.0};
  return s;
}

}  // namespace

TEST_CASE("Klein-Gordon mass term on a constant") {
  const GridSpec g = grid();
  State s = State::zero(g);
  s.v = ScalarField::constant(g, 2.5);
  const ClosureResult c = time_deriv_closure(s, NullFormSpec{}, 2);
  CHECK(c.v[2].max_abs() == doctest::Approx(2.5));
  CHECK(c.v[2][0] == doctest::Approx(-2.5));
  CHECK(c.u[2].max_abs() == 0.0);
}

TEST_CASE("harmonic linear field has no acceleration away from the seam") {
  const GridSpec g = grid();
  State s = State::zero(g);
  s.u = ScalarField::coordinate(g, 1);
  const ClosureResult c = time_deriv_closure(s, NullFormSpec{}, 2);
  double m = 0.0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 3; i < g.n - 3; ++i) m = std::max(m, std::abs(c.u[2].at(i, j)));
  CHECK(m < 1e-12);
}

TEST_CASE("zero spec reproduces the linear system exactly") {
  const GridSpec g = grid();
  const State s = gaussian_state(g, 1.0);
  const ClosureResult c = time_deriv_closure(s, NullFormSpec{}, 4);
  CHECK((c.u[2] - laplacian(s.u)).max_abs() == 0.0);
  CHECK((c.v[2] - (laplacian(s.v) - s.v)).max_abs() == 0.0);
  CHECK((c.u[3] - laplacian(s.ut)).max_abs() == 0.0);
  CHECK((c.v[4] - (laplacian(c.v[2]) - c.v[2])).max_abs() < 1e-12);
}

TEST_CASE("closure depth bounds") {
  const GridSpec g = grid();
  const State s = State::zero(g);
  CHECK_THROWS(time_deriv_closure(s, NullFormSpec{}, 1));
  CHECK_THROWS(time_deriv_closure(s, NullFormSpec{}, 7));
  CHECK_THROWS(time_deriv_closure(s, NullFormSpec{}, 5, 4));
  CHECK(time_deriv_closure(s, NullFormSpec{}, 6).u.size() == 7);
}

TEST_CASE("second time derivative matches trajectory differencing") {
  const GridSpec g = GridSpec::with_cfl(128, 8.0, 0.05);
  const NullFormSpec spec = mixed_spec();
  const State s0 = gaussian_state(g, 0.3);
  // Three RK4 states give a centered second difference at the middle one.
  Stepper stepper(Scheme::rk4, g.dt, nonlinear_sources(spec));
  std::vector<State> sys{s0};
  stepper.step(sys);
  const State s1 = sys[0];
  stepper.step(sys);
  const State& s2 = sys[0];
  const double dt = g.dt;
  const ClosureResult c = time_deriv_closure(s1, spec, 3);
  const ScalarField d2u = (s2.u - 2.0 * s1.u + s0.u) * (1.0 / (dt * dt));
  const ScalarField d2v = (s2.v - 2.0 * s1.v + s0.v) * (1.0 / (dt * dt));
  CHECK((d2u - c.u[2]).max_abs() < 1e-3 * c.u[2].max_abs());
  CHECK((d2v - c.v[2]).max_abs() < 1e-3 * c.v[2].max_abs());
  // The same differences of the velocities give the third level.
  const ScalarField d3u = (s2.ut - 2.0 * s1.ut + s0.ut) * (1.0 / (dt * dt));
  CHECK((d3u - c.u[3]).max_abs() < 1e-2 * c.u[3].max_abs());
}

TEST_CASE("cutoff profile") {
  const Cutoff chi{2.0};
  CHECK(chi.value(0.0) == 1.0);
  CHECK(chi.value(2.0) == 1.0);
  CHECK(chi.value(4.0) == 0.0);
  CHECK(chi.value(7.0) == 0.0);
  double prev = 1.0;
  for (double t = 2.0; t <= 4.0; t += 0.05) {
    CHECK(chi.value(t) <= prev + 1e-15);
    prev = chi.value(t);
  }
  CHECK(chi.value(3.0) == doctest::Approx(0.5));
  // Derivatives against finite differences.
  const double h = 1e-5;
  for (double t : {2.3, 2.9, 3.6})
    for (int k = 0; k < 4; ++k)
      CHECK(chi.derivative(t, k + 1) ==
            doctest::Approx((chi.derivative(t + h, k) - chi.derivative(t - h, k)) / (2 * h)).epsilon(1e-5));
}

TEST_CASE("sources are quadratic") {
  const GridSpec g = grid();
  const NullFormSpec spec = mixed_spec();
  const State s = gaussian_state(g, 1.0);
  State s2 = s;
  s2 *= 3.0;
  const Sources a = sources_mixed(spec, s, s), b = sources_mixed(spec, s2, s2);
  CHECK((b.fu - 9.0 * a.fu).max_abs() < 1e-12 * (1 + b.fu.max_abs()));
  CHECK((b.fv - 9.0 * a.fv).max_abs() < 1e-12 * (1 + b.fv.max_abs()));
}

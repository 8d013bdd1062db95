#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wkg/data.hpp"

using namespace wkg;

TEST_CASE("profiles") {
  DataProfile p;
  p.width = 2.0;
  CHECK(p.profile(0, 0) == 1.0);
  CHECK(p.profile(2, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK(p.support_radius() == 12.0);
  DataProfile b;
  b.shape = DataShape::annular_bump;
  b.radius = 3.0;
  b.width = 1.0;
  CHECK(b.profile(3.0, 0.0) == doctest::Approx(1.0));
  CHECK(b.profile(0.0, 4.0) == 0.0);
  CHECK(b.profile(0.0, 2.0) == 0.0);
  CHECK(b.profile(3.5, 0.0) == doctest::Approx(std::exp(1.0 - 1.0 / 0.75)));
  CHECK(b.support_radius() == 4.0);
  b.center_x1 = 3.0;
  b.center_x2 = 4.0;
  CHECK(b.support_radius() == 9.0);
}

TEST_CASE("shape names") {
  CHECK(parse_shape("gaussian") == DataShape::gaussian);
  CHECK(parse_shape("annular-bump") == DataShape::annular_bump);
  CHECK(parse_shape(name(DataShape::annular_bump)) == DataShape::annular_bump);
  CHECK_THROWS(parse_shape("box"));
}

TEST_CASE("validation") {
  DataProfile p;
  p.amplitude = -1;
  CHECK_THROWS(p.validate());
  p.amplitude = 0.1;
  p.width = 0;
  CHECK_THROWS(p.validate());
  p.width = 1;
  p.amplitude = NAN;
  CHECK_THROWS(p.validate());
}

TEST_CASE("initial data weights and linearity in amplitude") {
  const GridSpec g = GridSpec::with_cfl(32, 8, 0.25);
  DataProfile p;
  p.amplitude = 0.2;
  p.w_u0 = 1;
  p.w_u1 = -2;
  p.w_v0 = 0;
  p.w_v1 = 3;
  const State s = initial_data(g, p);
  const auto k = g.index(16, 16);
  CHECK(s.u[k] == doctest::Approx(0.2));
  CHECK(s.ut[k] == doctest::Approx(-0.4));
  CHECK(s.v[k] == 0.0);
  CHECK(s.vt[k] == doctest::Approx(0.6));
  p.amplitude = 0;
  CHECK(initial_data(g, p).max_abs() == 0.0);
}

TEST_CASE("smallness norm") {
  const GridSpec g = GridSpec::with_cfl(128, 12, 0.25);
  DataProfile p;
  p.amplitude = 1.0;
  const State s1 = initial_data(g, p);
  p.amplitude = 0.05;
  const State s2 = initial_data(g, p);
  const double n1 = smallness_norm(s1, 1), n2 = smallness_norm(s2, 1);
  CHECK(n1 > 0);
  CHECK(n2 == doctest::Approx(0.05 * n1).epsilon(1e-12));
  CHECK(smallness_norm(State::zero(g), 2) == 0.0);
  CHECK(smallness_norm(s1, 2) >= n1);
  // H^0 part alone bounds the norm from below: E(g, 0, g, 0) = 5 pi / 2 for g = exp(-r^2).
  const double e0 = std::sqrt(2.5 * std::numbers::pi);
  CHECK(n1 >= e0 * (1 - 1e-6));
}

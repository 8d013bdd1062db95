#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "wkg/regions.hpp"
#include "wkg/vectorfields.hpp"

using namespace wkg;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("dyadic floor") {
  CHECK(dyadic_floor(0.3) == 1.0);
  CHECK(dyadic_floor(1.0) == 1.0);
  CHECK(dyadic_floor(1.99) == 1.0);
  CHECK(dyadic_floor(2.0) == 2.0);
  CHECK(dyadic_floor(7.5) == 4.0);
  CHECK(dyadic_floor(1024.0) == 1024.0);
}

TEST_CASE("classification examples") {
  CHECK(classify(0.1, 0, 0).kind == RegionKind::outer);
  CHECK(classify(3.0, 20.0, 0).kind == RegionKind::outer);
  CHECK(classify(0.5, 0, 0).kind == RegionKind::shell);
  const RegionId a = classify(6.0, 0.0, 1.0);
  CHECK(a.kind == RegionKind::interior);
  CHECK(a.T == 4.0);
  CHECK(a.S == 4.0);
  const RegionId b = classify(6.0, 5.5, 0.0);
  CHECK(b.kind == RegionKind::shell);
  const RegionId c = classify(6.0, 0.0, 9.0);
  CHECK(c.kind == RegionKind::exterior);
  CHECK(c.S == 2.0);
  CHECK(classify(6.0, 3.0, 4.0) == classify_r(6.0, 5.0));
}

TEST_CASE("regions partition each slice") {
  const GridSpec g = GridSpec::with_cfl(64, 16, 0.25);
  for (double t : {0.5, 1.5, 3.0, 6.0, 12.0}) {
    const auto ids = regions_at(g, t);
    std::vector<int> hits(g.size(), 0);
    for (const RegionId& id : ids) {
      const RegionMask m = region_mask(g, t, id);
      CHECK_FALSE(m.empty());
      for (std::size_t k = 0; k < m.bits.size(); ++k) hits[k] += m.bits[k];
    }
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("region invariants on random points") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> tt(0.0, 100.0), rr(0.0, 150.0);
  for (int k = 0; k < 20000; ++k) {
    const double t = tt(rng), r = rr(rng);
    const RegionId id = classify_r(t, r);
    CHECK(id.T <= std::max(t, 1.0));
    if (t >= 1.0) CHECK(2 * id.T > t);
    if (id.kind == RegionKind::interior || id.kind == RegionKind::exterior) {
      const double q = std::abs(t - r);
      CHECK(id.S <= q);
      CHECK(q < 2 * id.S);
      CHECK(id.S >= 1.0);
      // Non-outer points have |t - r| comparable to at most 4 t.
      CHECK(id.S <= 4 * id.T);
    }
  }
}

TEST_CASE("cone bands") {
  const GridSpec g = GridSpec::with_cfl(128, 16, 0.25);
  const double t = 8.0;
  const RegionMask s1 = cone_band_mask(g, t, 1.0, ConeSide::both);
  const RegionMask in4 = cone_band_mask(g, t, 4.0, ConeSide::interior);
  const RegionMask ex4 = cone_band_mask(g, t, 4.0, ConeSide::exterior);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double q = t - std::hypot(g.coord(i), g.coord(j));
      const auto k = g.index(i, j);
      CHECK(bool(s1.bits[k]) == (std::abs(q) <= 2.0));
      CHECK(bool(in4.bits[k]) == (q >= 4.0 && q <= 8.0));
      CHECK(bool(ex4.bits[k]) == (-q >= 4.0 && -q <= 8.0));
    }
  const auto bands = default_bands({1, 2, 4});
  REQUIRE(bands.size() == 5);
  CHECK(bands[0].side == ConeSide::both);
  CHECK(bands[0].S == 1.0);
}

TEST_CASE("window trapezoid") {
  CHECK(window_trapezoid(0, 1, 1, 1, 2) == 0.0);
  CHECK(window_trapezoid(2, 1, 3, 3, 2) == doctest::Approx(2.0));
  // Clipped at both ends of [1, 2] for f = t.
  CHECK(window_trapezoid(0, 0, 4, 4, 1) == doctest::Approx(1.5));
}

TEST_CASE("hyperboloid admissibility") {
  CHECK(rho_admissible(2.0, 4.0));
  CHECK_FALSE(rho_admissible(0.5, 4.0));
  CHECK_FALSE(rho_admissible(9.0, 4.0));
  for (double T : {1.0, 2.0, 8.0, 32.0})
    for (double r : default_rhos(T)) CHECK(rho_admissible(r, T));
  const GridSpec g = GridSpec::with_cfl(32, 8, 0.25);
  CHECK_THROWS(HyperboloidIntegrator(g, 4.0, {0.1}));
}

TEST_CASE("hyperboloid integrals of time-only integrands") {
  // Over H_rho within [T, 2T], parametrised by x: f = 1 gives an annulus area, f = t gives (2 pi / 3)(t_hi^3 - t_lo^3).
  const GridSpec g = GridSpec::with_cfl(512, 20, 0.25);
  const double T = 4.0, rho = 2.0;
  std::vector<State> snaps;
  for (double t = 2.0; t <= 8.5; t += 0.25) snaps.push_back(State::zero(g, t));
  const double lo = T, hi = 2 * T;
  const double area = pi * ((hi * hi - rho * rho) - (lo * lo - rho * rho));
  const double one = hyperboloid_integral(snaps, rho, T, [](const State& s) { return ScalarField::constant(s.grid(), 1.0); });
  CHECK(one == doctest::Approx(area).epsilon(5e-3));
  const double lin = hyperboloid_integral(snaps, rho, T, [](const State& s) { return ScalarField::constant(s.grid(), s.time); });
  CHECK(lin == doctest::Approx(2 * pi / 3 * (hi * hi * hi - lo * lo * lo)).epsilon(5e-3));
  std::vector<State> short_snaps(snaps.begin(), snaps.begin() + 10);
  CHECK_THROWS(hyperboloid_integral(short_snaps, rho, T, [](const State& s) { return ScalarField::constant(s.grid(), 1.0); }));
}

TEST_CASE("space-time accumulators of zero data") {
  const GridSpec g = GridSpec::with_cfl(64, 16, 0.25);
  XTAccumulator xt(g, 2.0, default_bands({1, 2}), default_rhos(2.0), default_r_min(g));
  YTAccumulator yt(g, 2.0, default_bands({1, 2}));
  for (double t = 0.5; t <= 4.5; t += 0.5) {
    xt.feed(State::zero(g, t));
    yt.feed(t, ScalarField(g, t), ScalarField(g, t));
  }
  const XTResult r = xt.result();
  CHECK(r.total == 0.0);
  CHECK(yt.result() == 0.0);
  XTAccumulator partial(g, 2.0, default_bands({1}), default_rhos(2.0), default_r_min(g));
  partial.feed(State::zero(g, 1.5));
  partial.feed(State::zero(g, 3.0));
  CHECK_THROWS(partial.result());
}

TEST_CASE("space-time accumulator of a constant field") {
  // F = 1 on the S = 1 band: L2 squared over [T, 2T] is the band area integrated in time.
  const GridSpec g = GridSpec::with_cfl(256, 16, 0.25);
  const double T = 4.0;
  YTAccumulator yt(g, T, {Band{1.0, ConeSide::both}});
  double oracle = 0.0;
  for (double t = 3.0; t <= 9.0; t += 0.05) {
    yt.feed(t, ScalarField::constant(g, 1.0, t), ScalarField(g, t));
  }
  // Band area pi((t + 2)^2 - (t - 2)^2) = 8 pi t, integrated over [4, 8].
  oracle = 8 * pi * (64.0 - 16.0) / 2.0;
  CHECK(yt.result() == doctest::Approx(std::sqrt(T) * std::sqrt(oracle)).epsilon(5e-3));
}

TEST_CASE("hyperbolic charts") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int k = 0; k < 200; ++k) {
    const double x1 = U(rng), x2 = U(rng);
    const double r = std::hypot(x1, x2);
    const double t_in = r + 0.5 + std::abs(U(rng));
    const double t_ex = std::max(0.1, r - 0.5 - std::abs(U(rng)) * (r / 6));
    for (auto [t, chart] : {std::pair{t_in, Chart::interior}, std::pair{t_ex, Chart::exterior}}) {
      if (chart == Chart::exterior && !(r > t)) continue;
      const HyperCoords hc = to_hyperbolic(t, x1, x2, chart);
      const SpacetimePoint p = from_hyperbolic(hc);
      CHECK(p.t == doctest::Approx(t).epsilon(1e-10));
      CHECK(p.x1 == doctest::Approx(x1).epsilon(1e-10));
      CHECK(p.x2 == doctest::Approx(x2).epsilon(1e-10));
      CHECK(std::abs(jacobian(hc)) == doctest::Approx(std::abs(jacobian_determinant(hc))).epsilon(1e-10));
    }
  }
}

TEST_CASE("box in hyperbolic charts") {
  using P = PolyExpr;
  const P t = P::variable(Var::t), x1 = P::variable(Var::x1), x2 = P::variable(Var::x2);
  const std::vector<P> samples{t * t - x1 * x1 - x2 * x2, x1 * t, t * t * t + x1 * x2, x2 * x2 * t - x1};
  for (Chart c : {Chart::interior, Chart::exterior}) {
    for (const P& f : samples) {
      CHECK(box_chart_identity(f, c).is_zero());
      CHECK(box_hyperbolic_residual(f, c, chart_sample_points(c)) == 0.0);
    }
    for (const auto& pt : chart_sample_points(c)) CHECK(box_chart_value(samples[0], c, pt) == Rational(6));
  }
}

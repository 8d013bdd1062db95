#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wkg/diagnostics.hpp"

using namespace wkg;

TEST_CASE("decay fit recovers synthetic exponents") {
  std::vector<DecaySample> s;
  for (double T : {2.0, 4.0, 8.0, 16.0})
    for (double S : {1.0, 2.0, 4.0}) s.push_back({T, S, 3.0 * std::pow(T, -0.5) * std::pow(S, -1.25)});
  const DecayFit f = decay_fit(s);
  CHECK(f.a_T == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.a_S == doctest::Approx(-1.25).epsilon(1e-12));
  CHECK(f.log_c == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.samples.size() == 12);
}

TEST_CASE("decay fit with noise") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0, 0.05);
  std::vector<DecaySample> s;
  for (double T : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
    for (double S : {1.0, 2.0, 4.0, 8.0}) s.push_back({T, S, std::pow(T, -1.0) * std::pow(S, 0.5) * std::exp(N(rng))});
  const DecayFit f = decay_fit(s);
  CHECK(f.a_T == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(f.a_S == doctest::Approx(0.5).epsilon(0.1));
  CHECK(f.r2 < 1.0);
  CHECK(f.r2 > 0.9);
}

TEST_CASE("decay fit rejects degenerate inputs") {
  CHECK_THROWS(decay_fit({{1, 1, 1}, {2, 1, 1}, {4, 1, 1}}));
  // Four cells, all with S = 1: the S column is collinear with the intercept.
  CHECK_THROWS(decay_fit({{1, 1, 1}, {2, 1, 2}, {4, 1, 3}, {8, 1, 4}}));
  CHECK_THROWS(decay_fit({{1, 1, 0}, {2, 1, 1}, {4, 2, 1}, {8, 4, 1}}));
}

TEST_CASE("power fit and growth exponent") {
  std::vector<double> x, y;
  for (double t = 1; t <= 16; t *= 1.5) {
    x.push_back(t);
    y.push_back(2.0 * std::pow(t, 0.3));
  }
  const PowerFit p = power_fit(x, y);
  CHECK(p.exponent == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(p.log_c == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  std::vector<TimeValue> series;
  for (double t = 2; t <= 8; t += 0.5) series.push_back({t, 5.0 * std::pow(t, 0.2)});
  CHECK(growth_exponent(series) == doctest::Approx(0.2).epsilon(1e-12));
  series.resize(4);
  CHECK_THROWS(growth_exponent(series));
  CHECK_THROWS(growth_exponent({{1, 1}, {8, -1}}));
  CHECK_THROWS(power_fit({1, 2}, {1}));
}

TEST_CASE("region sampling") {
  const GridSpec g = GridSpec::with_cfl(64, 16, 0.25);
  const auto zero = sample_regions(State::zero(g, 6.0));
  long cells = 0;
  for (const auto& r : zero) {
    cells += r.cells;
    CHECK(r.sup_du == 0.0);
    CHECK(r.sup_Zu == 0.0);
    CHECK(r.t == 6.0);
  }
  CHECK(cells == static_cast<long>(g.size()));
  for (std::size_t k = 1; k < zero.size(); ++k) {
    const auto& a = zero[k - 1].id;
    const auto& b = zero[k].id;
    CHECK((a.kind < b.kind || (a.kind == b.kind && a.S < b.S)));
  }
  // u = sin x1 has sup |du| = 1 on every region touching x1 = 0; v = 2 everywhere.
  const GridSpec gp = GridSpec::with_cfl(128, 4 * std::numbers::pi, 0.25);
  State s = State::zero(gp, 6.0);
  s.u = ScalarField::from_function(gp, 6.0, [](double x, double) { return std::sin(x); });
  s.v = ScalarField::constant(gp, 2.0, 6.0);
  const auto rows = sample_regions(s);
  for (const auto& r : rows) {
    CHECK(r.sup_du <= 1.0 + 1e-4);
    CHECK(r.sup_v == 2.0);
    CHECK(r.sup_dv == 0.0);
  }
  CHECK(name(RegionQuantity::Zu) == std::string("Zu"));
}

TEST_CASE("decay fit over region rows") {
  std::vector<RegionSample> rows;
  for (double T : {2.0, 4.0, 8.0})
    for (double S : {1.0, 2.0}) {
      RegionSample r;
      r.id = {RegionKind::interior, T, S};
      r.sup_du = std::pow(T, -0.5) / S;
      rows.push_back(r);
    }
  RegionSample shell;
  shell.id = {RegionKind::shell, 2.0, 0.0};
  shell.sup_du = 100.0;
  rows.push_back(shell);
  RegionSample zero;
  zero.id = {RegionKind::exterior, 8.0, 4.0};
  rows.push_back(zero);
  const DecayFit f = decay_fit_regions(rows, RegionQuantity::du);
  CHECK(f.samples.size() == 6);
  CHECK(f.a_T == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.a_S == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("bootstrap thresholds") {
  const GridSpec g = GridSpec::with_cfl(32, 8, 0.25);
  ClosureResult zero;
  for (int k = 0; k <= 4; ++k) {
    zero.u.emplace_back(g, 2.0);
    zero.v.emplace_back(g, 2.0);
  }
  BootstrapConfig cfg;
  const auto slice = bootstrap_slice(zero, 2.0, cfg);
  CHECK(slice.size() == 5);
  for (const auto& v : slice) CHECK(v.value == 0.0);
  ClosureResult shallow = zero;
  shallow.u.pop_back();
  CHECK_THROWS(bootstrap_slice(shallow, 2.0, cfg));

  // A constant du field: the worst ratio is where the weight is smallest.
  ClosureResult c = zero;
  c.u[1] = ScalarField::constant(g, 1.0, 0.0);
  cfg.which = {BootstrapBound::du};
  cfg.eps = 0.1;
  const auto v = bootstrap_slice(c, 0.0, cfg);
  REQUIRE(v.size() == 1);
  const double r = std::hypot(v[0].x1, v[0].x2);
  const double jr = std::sqrt(1 + r * r);
  CHECK(v[0].threshold == doctest::Approx(cfg.C * cfg.eps * std::pow(jr, -1.0 + cfg.delta)));
  CHECK(r == doctest::Approx(8.0 * std::sqrt(2.0)));
  BootstrapConfig bad;
  bad.delta = 0.7;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("bootstrap monitor keeps the first violation") {
  const GridSpec g = GridSpec::with_cfl(32, 8, 0.25);
  BootstrapConfig cfg;
  cfg.which = {BootstrapBound::dv};
  cfg.eps = 0.01;
  cfg.C = 1.0;
  BootstrapMonitor m(cfg, NullFormSpec{});
  m.observe(State::zero(g, 0.0));
  CHECK(m.clean());
  State s = State::zero(g, 1.0);
  s.vt = ScalarField::constant(g, 0.5, 1.0);
  m.observe(s);
  s.set_time(2.0);
  m.observe(s);
  REQUIRE(m.violations().size() == 1);
  CHECK(m.violations()[0].t == 1.0);
  CHECK(m.worst_ratio()[0] > 1.0);
}

TEST_CASE("finite speed of propagation") {
  GridSpec g = GridSpec::with_cfl(128, 16, 0.25);
  DataProfile p;
  p.shape = DataShape::annular_bump;
  p.amplitude = 0.1;
  p.radius = 0.0;
  p.width = 1.5;
  p.center_x1 = 8.0;
  const State a = initial_data(g, p);
  State b = a;
  b *= 0.0;
  b.set_time(0.0);
  EvolutionConfig cfg;
  cfg.horizon = 3.0;
  cfg.spec.n1 = {1, 0.5, 0, 0};
  // The perturbation lives in |x - (8, 0)| < 1.5; the ball around (-4, 0) of radius 8 stays out of reach.
  const double d = finite_speed_check(a, b, -4.0, 0.0, 8.0, cfg);
  CHECK(d < 1e-8);
  // Reaching into the support gives an O(1) difference.
  CHECK(finite_speed_check(a, b, 6.0, 0.0, 8.0, cfg) > 0.1);
}

TEST_CASE("lifespan of zero data") {
  SweepSettings s;
  s.grid = GridSpec::with_cfl(32, 8, 0.25);
  s.evolution.horizon = 1.0;
  s.evolution.snapshot_stride = 4;
  s.energy.evf_cap = 2;
  const SweepRow row = lifespan_run(0.0, DataProfile{}, s);
  CHECK(row.reason == RunStatus::horizon);
  CHECK(row.T_star == doctest::Approx(1.0));
  CHECK(std::isnan(row.growth_p));
  CHECK_THROWS(lifespan_sweep({-1.0}, DataProfile{}, s));
}

TEST_CASE("decay fit properties") {
  std::vector<DecaySample> flat, base, scaled;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  for (double T : {2.0, 4.0, 8.0})
    for (double S : {1.0, 2.0, 4.0}) {
      flat.push_back({T, S, 0.3});
      const double a = U(rng);
      base.push_back({T, S, a});
      scaled.push_back({T, S, 7.5 * a});
    }
  const DecayFit f = decay_fit(flat);
  CHECK(std::abs(f.a_T) < 1e-12);
  CHECK(std::abs(f.a_S) < 1e-12);
  CHECK(f.r2 == 1.0);
  const DecayFit b = decay_fit(base), s = decay_fit(scaled);
  CHECK(s.a_T == doctest::Approx(b.a_T).epsilon(1e-10));
  CHECK(s.a_S == doctest::Approx(b.a_S).epsilon(1e-10));
  CHECK(s.log_c == doctest::Approx(b.log_c + std::log(7.5)).epsilon(1e-10));
  CHECK(b.r2 >= 0.0);
  CHECK(b.r2 <= 1.0);
}

TEST_CASE("growth exponents add over products") {
  std::vector<TimeValue> e1, e2, prod;
  for (double t = 1.0; t <= 16.0; t *= 1.25) {
    const double a = 2.0 * std::pow(t, 0.15), b = 0.5 * std::pow(t, 0.35);
    e1.push_back({t, a});
    e2.push_back({t, b});
    prod.push_back({t, a * b});
  }
  CHECK(growth_exponent(prod) == doctest::Approx(growth_exponent(e1) + growth_exponent(e2)).epsilon(1e-12));
  std::vector<TimeValue> flat;
  for (double t = 1.0; t <= 8.0; t += 1.0) flat.push_back({t, 3.0});
  CHECK(std::abs(growth_exponent(flat)) < 1e-12);
}

TEST_CASE("bootstrap violations are monotone in C and delta") {
  const GridSpec g = GridSpec::with_cfl(48, 8, 0.25);
  State s = State::zero(g, 2.0);
  s.u = ScalarField::from_function(g, 2.0, [](double x, double y) { return 0.3 * std::exp(-x * x - 0.5 * y * y); });
  s.ut = ScalarField::from_function(g, 2.0, [](double x, double y) { return 0.2 * x * std::exp(-x * x - y * y); });
  s.v = ScalarField::from_function(g, 2.0, [](double x, double y) { return 0.4 * std::exp(-(x - 1) * (x - 1) - y * y); });
  const ClosureResult c = time_deriv_closure(s, NullFormSpec{}, 4);
  auto violated = [&](double C, double delta) {
    BootstrapConfig cfg;
    cfg.C = C;
    cfg.delta = delta;
    cfg.eps = 0.05;
    int n = 0;
    for (const auto& v : bootstrap_slice(c, 2.0, cfg)) n += v.value > v.threshold;
    return n;
  };
  int prev = 100;
  for (double C : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const int n = violated(C, 0.05);
    CHECK(n <= prev);
    prev = n;
  }
  CHECK(violated(0.5, 0.05) > 0);
  for (double C : {1.0, 4.0}) CHECK(violated(C, 0.2) <= violated(C, 0.05));
}

TEST_CASE("a constructed violation is located at its cell") {
  const GridSpec g = GridSpec::with_cfl(32, 8, 0.25);
  const double t = 3.0;
  BootstrapConfig cfg;
  cfg.which = {BootstrapBound::du};
  cfg.eps = 0.01;
  ClosureResult c;
  for (int k = 0; k <= 4; ++k) {
    c.u.emplace_back(g, t);
    c.v.emplace_back(g, t);
  }
  // Twice the threshold at one cell, half of it everywhere else.
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const double r = std::hypot(g.coord(i), g.coord(j));
      const double w = std::pow(1 + (t + r) * (t + r), -0.25) * std::pow(1 + (t - r) * (t - r), 0.5 * (-0.5 + cfg.delta));
      c.u[1].at(i, j) = (i == 20 && j == 9 ? 2.0 : 0.5) * cfg.C * cfg.eps * w;
    }
  BootstrapMonitor m(cfg, NullFormSpec{});
  m.observe(c, t);
  REQUIRE(m.violations().size() == 1);
  CHECK(m.violations()[0].x1 == g.coord(20));
  CHECK(m.violations()[0].x2 == g.coord(9));
  CHECK(m.worst_ratio()[0] == doctest::Approx(2.0));
}

TEST_CASE("finite speed check is symmetric and vanishes on identical data") {
  const GridSpec g = GridSpec::with_cfl(64, 12, 0.25);
  DataProfile p;
  p.shape = DataShape::annular_bump;
  p.amplitude = 0.1;
  p.width = 1.5;
  const State a = initial_data(g, p);
  p.center_x1 = 6.0;
  State b = a;
  b.axpy(1.0, initial_data(g, p));
  EvolutionConfig cfg;
  cfg.horizon = 1.0;
  cfg.spec.n2 = {0.5, 0, 0, 1};
  CHECK(finite_speed_check(a, a, 0, 0, 4, cfg) == 0.0);
  CHECK(finite_speed_check(a, b, 0, 0, 4, cfg) == finite_speed_check(b, a, 0, 0, 4, cfg));
}

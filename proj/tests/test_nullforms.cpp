#include <doctest.h>

#include <cmath>
#include <random>

#include "wkg/nullforms.hpp"

using namespace wkg;

namespace {
const PolyExpr T = PolyExpr::variable(Var::t);
const PolyExpr X1 = PolyExpr::variable(Var::x1);
const PolyExpr X2 = PolyExpr::variable(Var::x2);
const PolyExpr ONE = PolyExpr(Rational(1));

Rational at(const PolyExpr& p, int t, int x1, int x2) { return p.evaluate({Rational(t), Rational(x1), Rational(x2)}); }
}  // namespace

TEST_CASE("Q0 examples") {
  CHECK(apply_form(FormId::q0, T, T) == ONE);
  CHECK(apply_form(FormId::q0, T - X1, T - X1).is_zero());
  CHECK(apply_form(FormId::q0, T - X1, T + X1) == Rational(2) * ONE);
}

TEST_CASE("Q0i examples") {
  CHECK(apply_form(FormId::q01, T, X1) == ONE);
  std::mt19937_64 rng(3);
  const PolyExpr p = random_poly(rng, 3);
  CHECK(apply_form(FormId::q01, p, p).is_zero());
  CHECK(apply_form(FormId::q02, p, p).is_zero());
  CHECK(at(apply_form(FormId::q01, T * X1, T), 2, 3, 0) == Rational(-2));
}

TEST_CASE("Q12 examples") {
  CHECK(apply_form(FormId::q12, X1, X2) == ONE);
  std::mt19937_64 rng(4);
  const PolyExpr p = random_poly(rng, 3);
  CHECK(apply_form(FormId::q12, p, p).is_zero());
  CHECK(at(apply_form(FormId::q12, X1 * X2, X1), 0, 1, 2) == Rational(-1));
}

TEST_CASE("double-valued forms agree with the definitions") {
  const Grad<double> a{1.5, -2.0, 0.25}, b{-0.5, 3.0, 4.0};
  CHECK(q0(a, b) == doctest::Approx(1.5 * -0.5 - (-2.0 * 3.0 + 0.25 * 4.0)));
  CHECK(q0i(a, b, 1) == doctest::Approx(1.5 * 3.0 - (-0.5) * (-2.0)));
  CHECK(q0i(a, b, 2) == doctest::Approx(1.5 * 4.0 - (-0.5) * 0.25));
  CHECK(q12(a, b) == doctest::Approx(-2.0 * 4.0 - 0.25 * 3.0));
}

TEST_CASE("eval_N is the coefficient-weighted sum") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 20; ++k) {
    const Grad<double> a{U(rng), U(rng), U(rng)}, b{U(rng), U(rng), U(rng)};
    const FormCoeffs c{U(rng), U(rng), U(rng), U(rng)};
    const double sum = c[0] * q0(a, b) + c[1] * q0i(a, b, 1) + c[2] * q0i(a, b, 2) + c[3] * q12(a, b);
    CHECK(std::abs(eval_N(c, a, b) - sum) < 1e-15);
    CHECK(eval_N({1, 0, 0, 0}, a, b) == q0(a, b));
    CHECK(eval_N({0, 0, 0, 0}, a, b) == 0.0);
  }
}

TEST_CASE("forms are bilinear on polynomials") {
  std::mt19937_64 rng(6);
  for (auto f : {FormId::q0, FormId::q01, FormId::q02, FormId::q12}) {
    const PolyExpr a = random_poly(rng, 3), b = random_poly(rng, 3), c = random_poly(rng, 3);
    CHECK((apply_form(f, a + Rational(3) * b, c) - apply_form(f, a, c) - Rational(3) * apply_form(f, b, c)).is_zero());
    CHECK((apply_form(f, c, a - b) - apply_form(f, c, a) + apply_form(f, c, b)).is_zero());
  }
}

TEST_CASE("null cancellation on same-direction plane waves") {
  const std::vector<std::pair<Rational, Rational>> dirs{{1, 0}, {Rational(3, 5), Rational(-4, 5)},
                                                        {Rational(-8, 17), Rational(15, 17)}};
  for (const auto& [w1, w2] : dirs) {
    const PolyExpr ph = T - w1 * X1 - w2 * X2;
    const PolyExpr f = ph * ph * ph + Rational(2) * ph, g = ph * ph - Rational(5) * ph;
    for (auto q : {FormId::q0, FormId::q01, FormId::q02, FormId::q12}) CHECK(apply_form(q, f, g).is_zero());
  }
  // Transversal phases do interact.
  CHECK(!apply_form(FormId::q0, T - X1, T + X1).is_zero());
}

TEST_CASE("null decomposition reconstructs the form") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 50; ++k) {
    const Grad<double> a{U(rng), U(rng), U(rng)}, b{U(rng), U(rng), U(rng)};
    const FormCoeffs c{U(rng), U(rng), U(rng), U(rng)};
    const double t = 2.0 + U(rng), x1 = 3 * U(rng), x2 = 3 * U(rng) + 0.1;
    for (auto frame : {TangentFrame::cone, TangentFrame::hyperboloid}) {
      const NullSplit s = null_decompose(c, a, b, t, x1, x2, frame);
      CHECK(std::abs(s.t1 + s.t2 + s.t3 - eval_N(c, a, b)) < 1e-13);
    }
  }
}

TEST_CASE("null decomposition weights") {
  const Grad<double> a{0.3, -0.7, 0.2}, b{1.1, 0.4, -0.9};
  const FormCoeffs c{1, 0.5, -0.25, 2};
  // On the cone the (t - r) remainder vanishes.
  const NullSplit s = null_decompose(c, a, b, 5.0, 3.0, 4.0, TangentFrame::hyperboloid);
  CHECK(std::abs(s.t3) < 1e-15);
  // Tangential plane wave on the positive x1 axis: every term vanishes.
  const double fp = 0.8, gp = -1.3;
  const NullSplit p = null_decompose(c, {fp, -fp, 0}, {gp, -gp, 0}, 2.0, 2.5, 0.0, TangentFrame::cone);
  CHECK(p.t1 == doctest::Approx(0.0));
  CHECK(p.t2 == doctest::Approx(0.0));
  CHECK(p.t3 == doctest::Approx(0.0));
  CHECK_THROWS_AS(null_decompose(c, a, b, 1.0, 0.0, 0.0, TangentFrame::cone), std::domain_error);
}

TEST_CASE("catalog identities have zero residual") {
  std::mt19937_64 rng(9);
  const auto cat = identity_catalog();
  CHECK(cat.size() == 21);
  for (const auto& id : cat) {
    const IdentityResult r = check_identity(id, 10, 3, rng);
    INFO(r.name);
    CHECK(r.zero);
  }
}

TEST_CASE("rotation commutes with Q0 and the Q12 boost correction is required") {
  std::mt19937_64 rng(10);
  const PolyExpr a = random_poly(rng, 3), b = random_poly(rng, 3);
  const PolyExpr rot = apply_vf(ZId::omega12, apply_form(FormId::q0, a, b)) -
                       apply_form(FormId::q0, apply_vf(ZId::omega12, a), b) -
                       apply_form(FormId::q0, a, apply_vf(ZId::omega12, b));
  CHECK(rot.is_zero());
  CHECK(commutator_check(ZId::omega01, FormId::q12, a, b).is_zero());
  const PolyExpr bare = apply_vf(ZId::omega01, apply_form(FormId::q12, a, b)) -
                        apply_form(FormId::q12, apply_vf(ZId::omega01, a), b) -
                        apply_form(FormId::q12, a, apply_vf(ZId::omega01, b));
  CHECK(!bare.is_zero());
  CHECK((bare + apply_form(FormId::q02, a, b)).is_zero());
}

TEST_CASE("random inputs over all vector field and form pairs") {
  std::mt19937_64 rng(12);
  for (auto z : {ZId::omega12, ZId::omega01, ZId::omega02})
    for (auto f : {FormId::q0, FormId::q01, FormId::q02, FormId::q12})
      for (int k = 0; k < 5; ++k) CHECK(commutator_check(z, f, random_poly(rng, 3), random_poly(rng, 3)).is_zero());
}

TEST_CASE("flipped-sign fixture fails on the corrected identities and names them") {
  std::mt19937_64 rng(13);
  std::vector<std::string> failing;
  for (const auto& id : flipped_sign_catalog()) {
    const IdentityResult r = check_identity(id, 3, 3, rng);
    if (!r.zero) {
      failing.push_back(r.name);
      CHECK(!r.first_failure.empty());
    }
  }
  const std::vector<std::string> expected{"Omega01 Q12", "Omega02 Q12", "Omega01 Q02",
                                          "Omega02 Q01", "Omega12 Q01", "Omega12 Q02"};
  CHECK(failing == expected);
}

TEST_CASE("degree overflow is rejected") {
  PolyExpr p = X1;
  for (int k = 0; k < 5; ++k) p = p * X1;
  CHECK_THROWS_AS(apply_form(FormId::q0, p * T, p * X2), DegreeOverflow);
}

TEST_CASE("spec validation") {
  NullFormSpec s;
  CHECK(s.is_zero());
  s.n1[2] = std::nan("");
  CHECK_THROWS(s.validate());
}

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace wkg {

using Rational = boost::multiprecision::cpp_rational;

enum class Var { t = 0, x1 = 1, x2 = 2 };

class DegreeOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Exact polynomial in (t, x1, x2) with rational coefficients.
class PolyExpr {
 public:
  using Exponents = std::array<int, 3>;
  static constexpr int kDefaultDegreeCap = 8;

  PolyExpr() = default;
  explicit PolyExpr(const Rational& c, int degree_cap = kDefaultDegreeCap);
  static PolyExpr variable(Var v, int degree_cap = kDefaultDegreeCap);
  static PolyExpr monomial(const Rational& c, Exponents e, int degree_cap = kDefaultDegreeCap);

  const std::map<Exponents, Rational>& terms() const { return terms_; }
  int degree() const;
  int degree_cap() const { return cap_; }
  bool is_zero() const { return terms_.empty(); }

  PolyExpr derivative(Var v) const;
  // Substitutes (t, x1, x2) := (p0, p1, p2).
  PolyExpr compose(const std::array<PolyExpr, 3>& sub) const;
  Rational evaluate(const std::array<Rational, 3>& point) const;
  double evaluate(double t, double x1, double x2) const;
  std::string to_string() const;

  PolyExpr& operator+=(const PolyExpr& o);
  PolyExpr& operator-=(const PolyExpr& o);
  PolyExpr& operator*=(const Rational& c);
  friend PolyExpr operator+(PolyExpr a, const PolyExpr& b) { return a += b; }
  friend PolyExpr operator-(PolyExpr a, const PolyExpr& b) { return a -= b; }
  friend PolyExpr operator-(PolyExpr a) { return a *= Rational(-1); }
  friend PolyExpr operator*(PolyExpr a, const Rational& c) { return a *= c; }
  friend PolyExpr operator*(const Rational& c, PolyExpr a) { return a *= c; }
  friend PolyExpr operator*(const PolyExpr& a, const PolyExpr& b);
  friend bool operator==(const PolyExpr& a, const PolyExpr& b) { return a.terms_ == b.terms_; }

 private:
  void add_term(const Exponents& e, const Rational& c);

  std::map<Exponents, Rational> terms_;
  int cap_ = kDefaultDegreeCap;
};

// Random polynomial of total degree <= degree with small rational coefficients.
PolyExpr random_poly(std::mt19937_64& rng, int degree, int degree_cap = PolyExpr::kDefaultDegreeCap);

// Vector fields acting on exact polynomials.
PolyExpr poly_omega12(const PolyExpr& p);
PolyExpr poly_omega0(const PolyExpr& p, int i);
PolyExpr poly_scaling(const PolyExpr& p);
PolyExpr poly_box(const PolyExpr& p);

}  // namespace wkg

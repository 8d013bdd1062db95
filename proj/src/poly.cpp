#include "wkg/poly.hpp"

#include <sstream>

namespace wkg {

PolyExpr::PolyExpr(const Rational& c, int degree_cap) : cap_(degree_cap) {
  if (c != 0) terms_[{0, 0, 0}] = c;
}

PolyExpr PolyExpr::variable(Var v, int degree_cap) {
  Exponents e{0, 0, 0};
  e[static_cast<int>(v)] = 1;
  return monomial(Rational(1), e, degree_cap);
}

PolyExpr PolyExpr::monomial(const Rational& c, Exponents e, int degree_cap) {
  PolyExpr p;
  p.cap_ = degree_cap;
  p.add_term(e, c);
  return p;
}

void PolyExpr::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  if (e[0] + e[1] + e[2] > cap_)
    throw DegreeOverflow("polynomial degree exceeds cap " + std::to_string(cap_));
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int PolyExpr::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

PolyExpr PolyExpr::derivative(Var v) const {
  const int k = static_cast<int>(v);
  PolyExpr out;
  out.cap_ = cap_;
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponents f = e;
    f[k] -= 1;
    out.add_term(f, c * e[k]);
  }
  return out;
}

PolyExpr PolyExpr::compose(const std::array<PolyExpr, 3>& sub) const {
  PolyExpr out(Rational(0), cap_);
  for (const auto& [e, c] : terms_) {
    PolyExpr term(c, cap_);
    for (int k = 0; k < 3; ++k)
      for (int p = 0; p < e[k]; ++p) term = term * sub[k];
    out += term;
  }
  return out;
}

Rational PolyExpr::evaluate(const std::array<Rational, 3>& point) const {
  Rational s = 0;
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (int k = 0; k < 3; ++k)
      for (int p = 0; p < e[k]; ++p) m *= point[k];
    s += m;
  }
  return s;
}

double PolyExpr::evaluate(double t, double x1, double x2) const {
  const double pt[3] = {t, x1, x2};
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = static_cast<double>(c);
    for (int k = 0; k < 3; ++k)
      for (int p = 0; p < e[k]; ++p) m *= pt[k];
    s += m;
  }
  return s;
}

std::string PolyExpr::to_string() const {
  if (terms_.empty()) return "0";
  static const char* names[3] = {"t", "x1", "x2"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c << ")";
    for (int k = 0; k < 3; ++k)
      if (e[k] > 0) os << "*" << names[k] << (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
  }
  return os.str();
}

PolyExpr& PolyExpr::operator+=(const PolyExpr& o) {
  cap_ = std::max(cap_, o.cap_);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PolyExpr& PolyExpr::operator-=(const PolyExpr& o) {
  cap_ = std::max(cap_, o.cap_);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PolyExpr& PolyExpr::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

PolyExpr operator*(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr out;
  out.cap_ = std::min(a.cap_, b.cap_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
  return out;
}

PolyExpr random_poly(std::mt19937_64& rng, int degree, int degree_cap) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 5);
  PolyExpr p(Rational(0), degree_cap);
  for (int d = 0; d <= degree; ++d)
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        const int c = d - a - b;
        p += PolyExpr::monomial(Rational(num(rng), den(rng)), {a, b, c}, degree_cap);
      }
  return p;
}

PolyExpr poly_omega12(const PolyExpr& p) {
  const PolyExpr x1 = PolyExpr::variable(Var::x1, p.degree_cap());
  const PolyExpr x2 = PolyExpr::variable(Var::x2, p.degree_cap());
  return x2 * p.derivative(Var::x1) - x1 * p.derivative(Var::x2);
}

PolyExpr poly_omega0(const PolyExpr& p, int i) {
  const Var xi = i == 1 ? Var::x1 : Var::x2;
  const PolyExpr t = PolyExpr::variable(Var::t, p.degree_cap());
  return t * p.derivative(xi) + PolyExpr::variable(xi, p.degree_cap()) * p.derivative(Var::t);
}

PolyExpr poly_scaling(const PolyExpr& p) {
  const int cap = p.degree_cap();
  return PolyExpr::variable(Var::t, cap) * p.derivative(Var::t) +
         PolyExpr::variable(Var::x1, cap) * p.derivative(Var::x1) +
         PolyExpr::variable(Var::x2, cap) * p.derivative(Var::x2);
}

PolyExpr poly_box(const PolyExpr& p) {
  return p.derivative(Var::t).derivative(Var::t) - p.derivative(Var::x1).derivative(Var::x1) -
         p.derivative(Var::x2).derivative(Var::x2);
}

}  // namespace wkg

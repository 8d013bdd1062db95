#include "wkg/nullforms.hpp"

#include <cmath>

namespace wkg {

const char* name(FormId f) {
  switch (f) {
    case FormId::q0: return "Q0";
    case FormId::q01: return "Q01";
    case FormId::q02: return "Q02";
    case FormId::q12: return "Q12";
  }
  return "?";
}

const char* name(ZId z) {
  switch (z) {
    case ZId::omega12: return "Omega12";
    case ZId::omega01: return "Omega01";
    case ZId::omega02: return "Omega02";
  }
  return "?";
}

const char* name(DId d) {
  switch (d) {
    case DId::t: return "dt";
    case DId::x1: return "d1";
    case DId::x2: return "d2";
  }
  return "?";
}

bool NullFormSpec::is_zero() const {
  for (int k = 0; k < 4; ++k)
    if (n1[k] != 0.0 || n2[k] != 0.0) return false;
  return true;
}

void NullFormSpec::validate() const {
  for (int k = 0; k < 4; ++k)
    if (!std::isfinite(n1[k]) || !std::isfinite(n2[k]))
      throw std::invalid_argument("null form spec: non-finite coefficient");
}

double NullFormSpec::max_abs_coeff() const {
  double m = 0;
  for (int k = 0; k < 4; ++k) m = std::max({m, std::abs(n1[k]), std::abs(n2[k])});
  return m;
}

namespace {

void check_grids(const Grad<ScalarField>& a, const Grad<ScalarField>& b) {
  const GridSpec& g = a.t.grid();
  for (const ScalarField* f : {&a.x1, &a.x2, &b.t, &b.x1, &b.x2})
    if (!g.same_layout(f->grid()) || f->size() != a.t.size()) throw GridError("null form: mismatched grids");
}

Grad<double> at(const Grad<ScalarField>& g, std::size_t k) { return {g.t[k], g.x1[k], g.x2[k]}; }

}  // namespace

ScalarField eval_N(const FormCoeffs& c, const Grad<ScalarField>& a, const Grad<ScalarField>& b) {
  ScalarField out(a.t.grid(), a.t.time());
  accumulate_N(out, 1.0, c, a, b);
  return out;
}

void accumulate_N(ScalarField& out, double scale, const FormCoeffs& c, const Grad<ScalarField>& a,
                  const Grad<ScalarField>& b) {
  check_grids(a, b);
  if (!out.grid().same_layout(a.t.grid())) throw GridError("null form: mismatched grids");
  if (c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0) return;
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < n; ++k) out[k] += scale * eval_N(c, at(a, k), at(b, k));
}

ScalarField q0(const Grad<ScalarField>& a, const Grad<ScalarField>& b) { return eval_N({1, 0, 0, 0}, a, b); }

ScalarField q0i(const Grad<ScalarField>& a, const Grad<ScalarField>& b, int i) {
  return eval_N(i == 1 ? FormCoeffs{0, 1, 0, 0} : FormCoeffs{0, 0, 1, 0}, a, b);
}

ScalarField q12(const Grad<ScalarField>& a, const Grad<ScalarField>& b) { return eval_N({0, 0, 0, 1}, a, b); }

Grad<PolyExpr> poly_grad(const PolyExpr& p) {
  return {p.derivative(Var::t), p.derivative(Var::x1), p.derivative(Var::x2)};
}

PolyExpr eval_N(const FormCoeffs& c, const Grad<PolyExpr>& a, const Grad<PolyExpr>& b) {
  PolyExpr out(Rational(0), a.t.degree_cap());
  for (int k = 0; k < 4; ++k)
    if (c[k] != 0.0) out += apply_form(static_cast<FormId>(k), a, b) * Rational(c[k]);
  return out;
}

NullSplit null_decompose(const FormCoeffs& c, const Grad<double>& dphi, const Grad<double>& dpsi, double t,
                         double x1, double x2, TangentFrame frame) {
  const double r = std::hypot(x1, x2);
  if (frame == TangentFrame::cone && !(r > 0.0)) throw std::domain_error("null_decompose: r = 0");
  if (frame == TangentFrame::hyperboloid && !(t > 0.0)) throw std::domain_error("null_decompose: t <= 0");
  const double denom = frame == TangentFrame::cone ? r : t;
  const double w1 = x1 / denom, w2 = x2 / denom;
  const double tphi1 = dphi.x1 + w1 * dphi.t, tphi2 = dphi.x2 + w2 * dphi.t;
  const double tpsi1 = dpsi.x1 + w1 * dpsi.t, tpsi2 = dpsi.x2 + w2 * dpsi.t;

  NullSplit s;
  // Q0
  s.t1 += c[0] * (-dphi.x1 * tpsi1 - dphi.x2 * tpsi2);
  s.t2 += c[0] * dpsi.t * (w1 * tphi1 + w2 * tphi2);
  s.t3 += c[0] * (1.0 - w1 * w1 - w2 * w2) * dphi.t * dpsi.t;
  // Q01, Q02
  s.t1 += c[1] * dphi.t * tpsi1 + c[2] * dphi.t * tpsi2;
  s.t2 += -c[1] * dpsi.t * tphi1 - c[2] * dpsi.t * tphi2;
  // Q12
  s.t1 += c[3] * (dphi.x1 * tpsi2 - dphi.x2 * tpsi1);
  s.t2 += c[3] * dpsi.t * (w1 * tphi2 - w2 * tphi1);
  return s;
}

NullSplitField null_decompose(const FormCoeffs& c, const Grad<ScalarField>& dphi, const Grad<ScalarField>& dpsi,
                              double t, double r_min, TangentFrame frame) {
  check_grids(dphi, dpsi);
  const GridSpec& g = dphi.t.grid();
  NullSplitField out{ScalarField(g, t), ScalarField(g, t), ScalarField(g, t)};
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const std::size_t k = g.index(i, j);
      const double x1 = g.coord(i), x2 = g.coord(j);
      const Grad<double> a = at(dphi, k), b = at(dpsi, k);
      if (frame == TangentFrame::cone && std::hypot(x1, x2) < r_min) {
        out.t3[k] = eval_N(c, a, b);
        continue;
      }
      const NullSplit s = null_decompose(c, a, b, t, x1, x2, frame);
      out.t1[k] = s.t1;
      out.t2[k] = s.t2;
      out.t3[k] = s.t3;
    }
  return out;
}

PolyExpr apply_form(FormId f, const PolyExpr& phi, const PolyExpr& psi) {
  return apply_form(f, poly_grad(phi), poly_grad(psi));
}

PolyExpr apply_vf(ZId z, const PolyExpr& p) {
  switch (z) {
    case ZId::omega12: return poly_omega12(p);
    case ZId::omega01: return poly_omega0(p, 1);
    case ZId::omega02: return poly_omega0(p, 2);
  }
  return p;
}

PolyExpr apply_d(DId d, const PolyExpr& p) { return p.derivative(static_cast<Var>(static_cast<int>(d))); }

namespace {

std::vector<Identity> build_catalog(int sign) {
  std::vector<Identity> cat;
  const ZId boosts[2] = {ZId::omega01, ZId::omega02};
  const FormId q0j[2] = {FormId::q01, FormId::q02};
  // Omega_0i Q12 = ... + sign (-1)^i Q0j
  for (int i = 1; i <= 2; ++i) {
    const int j = 3 - i;
    const int c = sign * (i == 1 ? -1 : 1);
    cat.push_back(ProductIdentity{std::string(name(boosts[i - 1])) + " Q12", boosts[i - 1], FormId::q12,
                                  {{c, q0j[j - 1]}}});
  }
  // Omega_0i Q0j = ... - sign Q_ij
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      std::vector<FormTerm> corr;
      if (i != j) corr.push_back({sign * (i == 1 ? -1 : 1), FormId::q12});
      cat.push_back(ProductIdentity{std::string(name(boosts[i - 1])) + " " + name(q0j[j - 1]), boosts[i - 1],
                                    q0j[j - 1], corr});
    }
  for (int i = 1; i <= 2; ++i)
    cat.push_back(ProductIdentity{std::string(name(boosts[i - 1])) + " Q0", boosts[i - 1], FormId::q0, {}});
  cat.push_back(ProductIdentity{"Omega12 Q12", ZId::omega12, FormId::q12, {}});
  // Omega12 Q0i = ... - sign (-1)^i Q0j
  for (int i = 1; i <= 2; ++i) {
    const int j = 3 - i;
    const int c = -sign * (i == 1 ? -1 : 1);
    cat.push_back(ProductIdentity{std::string("Omega12 ") + name(q0j[i - 1]), ZId::omega12, q0j[i - 1],
                                  {{c, q0j[j - 1]}}});
  }
  cat.push_back(ProductIdentity{"Omega12 Q0", ZId::omega12, FormId::q0, {}});

  const DId spatial[2] = {DId::x1, DId::x2};
  for (int i = 1; i <= 2; ++i)
    cat.push_back(CommutatorRelation{std::string("[") + name(boosts[i - 1]) + ", dt]", boosts[i - 1], DId::t,
                                     {{-1, spatial[i - 1]}}});
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      std::vector<DerivTerm> rhs;
      if (i == j) rhs.push_back({-1, DId::t});
      cat.push_back(CommutatorRelation{std::string("[") + name(boosts[i - 1]) + ", " + name(spatial[j - 1]) + "]",
                                       boosts[i - 1], spatial[j - 1], rhs});
    }
  cat.push_back(CommutatorRelation{"[Omega12, dt]", ZId::omega12, DId::t, {}});
  cat.push_back(CommutatorRelation{"[Omega12, d1]", ZId::omega12, DId::x1, {{1, DId::x2}}});
  cat.push_back(CommutatorRelation{"[Omega12, d2]", ZId::omega12, DId::x2, {{-1, DId::x1}}});
  return cat;
}

}  // namespace

std::vector<Identity> identity_catalog() { return build_catalog(1); }
std::vector<Identity> flipped_sign_catalog() { return build_catalog(-1); }

const std::string& identity_name(const Identity& id) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, id);
}

PolyExpr identity_residual(const ProductIdentity& id, const PolyExpr& phi, const PolyExpr& psi) {
  PolyExpr res = apply_vf(id.vf, apply_form(id.form, phi, psi));
  res -= apply_form(id.form, apply_vf(id.vf, phi), psi);
  res -= apply_form(id.form, phi, apply_vf(id.vf, psi));
  for (const FormTerm& c : id.correction) res -= apply_form(c.form, phi, psi) * Rational(c.coef);
  return res;
}

PolyExpr identity_residual(const CommutatorRelation& id, const PolyExpr& phi) {
  PolyExpr res = apply_vf(id.vf, apply_d(id.d, phi)) - apply_d(id.d, apply_vf(id.vf, phi));
  for (const DerivTerm& c : id.rhs) res -= apply_d(c.d, phi) * Rational(c.coef);
  return res;
}

PolyExpr commutator_check(ZId vf, FormId form, const PolyExpr& phi, const PolyExpr& psi) {
  for (const Identity& id : identity_catalog())
    if (const auto* p = std::get_if<ProductIdentity>(&id); p && p->vf == vf && p->form == form)
      return identity_residual(*p, phi, psi);
  throw std::logic_error("commutator_check: identity not in catalog");
}

IdentityResult check_identity(const Identity& id, int samples, int degree, std::mt19937_64& rng) {
  IdentityResult r{identity_name(id), samples, true, {}};
  for (int s = 0; s < samples; ++s) {
    const PolyExpr phi = random_poly(rng, degree);
    const PolyExpr psi = random_poly(rng, degree);
    const PolyExpr res = std::visit(
        [&](const auto& x) {
          if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ProductIdentity>)
            return identity_residual(x, phi, psi);
          else
            return identity_residual(x, phi);
        },
        id);
    if (!res.is_zero() && r.zero) {
      r.zero = false;
      r.first_failure = res.to_string();
    }
  }
  return r;
}

}  // namespace wkg

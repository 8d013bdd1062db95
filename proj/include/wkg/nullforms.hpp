#pragma once

#include <array>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "wkg/grid.hpp"
#include "wkg/poly.hpp"

namespace wkg {

enum class FormId { q0 = 0, q01 = 1, q02 = 2, q12 = 3 };
enum class ZId { omega12 = 0, omega01 = 1, omega02 = 2 };
enum class DId { t = 0, x1 = 1, x2 = 2 };

const char* name(FormId f);
const char* name(ZId z);
const char* name(DId d);

// Coefficients (c0, c01, c02, c12) of Q0, Q01, Q02, Q12.
using FormCoeffs = std::array<double, 4>;

struct NullFormSpec {
  FormCoeffs n1{0, 0, 0, 0};
  FormCoeffs n2{0, 0, 0, 0};

  bool is_zero() const;
  void validate() const;
  double max_abs_coeff() const;
};

// Gradient triple (d_t, d_1, d_2).
template <class T>
struct Grad {
  T t, x1, x2;
  const T& operator[](int k) const { return k == 0 ? t : (k == 1 ? x1 : x2); }
};

template <class T>
T q0(const Grad<T>& a, const Grad<T>& b) {
  return a.t * b.t - a.x1 * b.x1 - a.x2 * b.x2;
}

template <class T>
T q0i(const Grad<T>& a, const Grad<T>& b, int i) {
  return i == 1 ? a.t * b.x1 - b.t * a.x1 : a.t * b.x2 - b.t * a.x2;
}

template <class T>
T q12(const Grad<T>& a, const Grad<T>& b) {
  return a.x1 * b.x2 - a.x2 * b.x1;
}

template <class T>
T apply_form(FormId f, const Grad<T>& a, const Grad<T>& b) {
  switch (f) {
    case FormId::q0: return q0(a, b);
    case FormId::q01: return q0i(a, b, 1);
    case FormId::q02: return q0i(a, b, 2);
    case FormId::q12: return q12(a, b);
  }
  return q0(a, b);
}

inline double eval_N(const FormCoeffs& c, const Grad<double>& a, const Grad<double>& b) {
  return c[0] * q0(a, b) + c[1] * q0i(a, b, 1) + c[2] * q0i(a, b, 2) + c[3] * q12(a, b);
}

// Pointwise field versions; throw GridError on mismatched grids.
ScalarField q0(const Grad<ScalarField>& a, const Grad<ScalarField>& b);
ScalarField q0i(const Grad<ScalarField>& a, const Grad<ScalarField>& b, int i);
ScalarField q12(const Grad<ScalarField>& a, const Grad<ScalarField>& b);
ScalarField eval_N(const FormCoeffs& c, const Grad<ScalarField>& a, const Grad<ScalarField>& b);
// out += scale * N(a, b), without allocation.
void accumulate_N(ScalarField& out, double scale, const FormCoeffs& c, const Grad<ScalarField>& a,
                  const Grad<ScalarField>& b);

PolyExpr eval_N(const FormCoeffs& c, const Grad<PolyExpr>& a, const Grad<PolyExpr>& b);
Grad<PolyExpr> poly_grad(const PolyExpr& p);

// Null forms split as T1 = sum a_j Tj psi, T2 = sum b_j Tj phi, T3 = remainder carrying the
// (t - r) weight. Cone frame: Tj = d_j + (x_j/r) d_t and T3 vanishes identically.
// Hyperboloid frame: Tj = d_j + (x_j/t) d_t and T3 = c0 (1 - r^2/t^2) phi_t psi_t.
enum class TangentFrame { cone, hyperboloid };

struct NullSplit {
  double t1 = 0, t2 = 0, t3 = 0;
};

NullSplit null_decompose(const FormCoeffs& c, const Grad<double>& dphi, const Grad<double>& dpsi, double t,
                         double x1, double x2, TangentFrame frame = TangentFrame::cone);

struct NullSplitField {
  ScalarField t1, t2, t3;
};

// Field version. Points with r < r_min (cone frame) put the whole form into T3.
NullSplitField null_decompose(const FormCoeffs& c, const Grad<ScalarField>& dphi, const Grad<ScalarField>& dpsi,
                              double t, double r_min, TangentFrame frame = TangentFrame::cone);

// Exact identity catalog for vector fields acting on null forms.
struct FormTerm {
  int coef;
  FormId form;
};

struct ProductIdentity {
  std::string name;
  ZId vf;
  FormId form;
  std::vector<FormTerm> correction;
};

struct DerivTerm {
  int coef;
  DId d;
};

// [Z, d] = sum of rhs terms.
struct CommutatorRelation {
  std::string name;
  ZId vf;
  DId d;
  std::vector<DerivTerm> rhs;
};

using Identity = std::variant<ProductIdentity, CommutatorRelation>;

PolyExpr apply_form(FormId f, const PolyExpr& phi, const PolyExpr& psi);
PolyExpr apply_vf(ZId z, const PolyExpr& p);
PolyExpr apply_d(DId d, const PolyExpr& p);

std::vector<Identity> identity_catalog();
// Catalog with the correction signs flipped in the three families that carry corrections.
std::vector<Identity> flipped_sign_catalog();
const std::string& identity_name(const Identity& id);

PolyExpr identity_residual(const ProductIdentity& id, const PolyExpr& phi, const PolyExpr& psi);
PolyExpr identity_residual(const CommutatorRelation& id, const PolyExpr& phi);
// Residual of Z Q(phi, psi) - Q(Z phi, psi) - Q(phi, Z psi) - corrections, with the catalog's corrections.
PolyExpr commutator_check(ZId vf, FormId form, const PolyExpr& phi, const PolyExpr& psi);

struct IdentityResult {
  std::string name;
  int samples = 0;
  bool zero = true;
  std::string first_failure;
};

IdentityResult check_identity(const Identity& id, int samples, int degree, std::mt19937_64& rng);

}  // namespace wkg

#pragma once

#include <optional>
#include <vector>

#include "wkg/grid.hpp"
#include "wkg/nullforms.hpp"

namespace wkg {

// chi(t) = 1 on [0, T0], 0 beyond 2 T0, quintic smoothstep bridge between.
struct Cutoff {
  double T0 = 1.0;

  double value(double t) const { return derivative(t, 0); }
  double derivative(double t, int k) const;
};

struct Sources {
  ScalarField fu, fv;
};

// Gradient of a coefficient field w: (w_t, d1 w, d2 w).
Grad<ScalarField> coefficient_grad(const ScalarField& w, const ScalarField& wt);
// Gradient of d1 B: (d1 B_t, d11 B, d12 B).
Grad<ScalarField> target_grad(const ScalarField& b, const ScalarField& bt);

// Quadratic terms with coefficients taken from `coeff` and the differentiated slot from `target`:
//   fu = N1(coeff.v, d target.v) + N2(coeff.u, d target.v)
//   fv = N1(coeff.v, d target.u) + N2(coeff.u, d target.u)
// where N(w, dB) := sum_Q c_Q Q(w, d1 B).
Sources sources_mixed(const NullFormSpec& spec, const State& coeff, const State& target);

struct ClosureResult {
  std::vector<ScalarField> u, v;  // u[j] = d_t^j u, j = 0..k
};

inline constexpr int kDefaultClosureMax = 6;

// Time derivatives up to order k obtained by differentiating the equation in time.
ClosureResult time_deriv_closure(const State& s, const NullFormSpec& spec, int k, int k_max = kDefaultClosureMax,
                                 std::optional<Cutoff> cutoff = std::nullopt);

}  // namespace wkg

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace wkg {

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Uniform periodic grid on [-L, L)^2. Index (i, j) is x1 = -L + i dx, x2 = -L + j dx.
struct GridSpec {
  int n = 256;
  double half_width = 16.0;
  double dt = 0.0;
  int stencil_order = 4;

  double dx() const { return 2.0 * half_width / n; }
  double coord(int i) const { return -half_width + i * dx(); }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }

  // Throws GridError when n, dx, stencil order or the CFL bound are violated.
  void validate(double cfl_max = 0.5) const;

  static GridSpec with_cfl(int n, double half_width, double cfl, int stencil_order = 4);

  bool same_layout(const GridSpec& o) const {
    return n == o.n && half_width == o.half_width && stencil_order == o.stencil_order;
  }
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double time = 0.0);
  ScalarField(const GridSpec& grid, std::vector<double> values, double time = 0.0);

  static ScalarField constant(const GridSpec& grid, double c, double time = 0.0);
  static ScalarField from_function(const GridSpec& grid, double time,
                                   const std::function<double(double, double)>& f);
  // Field of x1 (axis 1) or x2 (axis 2).
  static ScalarField coordinate(const GridSpec& grid, int axis, double time = 0.0);

  const GridSpec& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(int i, int j) { return values_[grid_.index(i, j)]; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }

  double max_abs() const;
  bool all_finite() const;
  void require_finite(const char* what) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double c);
  // this += c * o
  ScalarField& axpy(double c, const ScalarField& o);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
  friend ScalarField operator*(ScalarField a, double c) { return a *= c; }
  friend ScalarField operator*(double c, ScalarField a) { return a *= c; }
  friend ScalarField operator-(ScalarField a) { return a *= -1.0; }

 private:
  void check_same(const ScalarField& o) const;

  GridSpec grid_{};
  std::vector<double> values_;
  double time_ = 0.0;
};

struct State {
  ScalarField u, ut, v, vt;
  double time = 0.0;

  static State zero(const GridSpec& grid, double time = 0.0);
  const GridSpec& grid() const { return u.grid(); }
  void set_time(double t);
  bool all_finite() const;
  double max_abs() const;
  // Throws GridError unless the four fields share a layout and time.
  void validate() const;

  State& axpy(double c, const State& o);
  State& operator*=(double c);
};

struct RegionMask {
  GridSpec grid;
  std::vector<std::uint8_t> bits;

  static RegionMask none(const GridSpec& grid) { return {grid, std::vector<std::uint8_t>(grid.size(), 0)}; }
  static RegionMask all(const GridSpec& grid) { return {grid, std::vector<std::uint8_t>(grid.size(), 1)}; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  RegionMask& operator|=(const RegionMask& o);
  RegionMask& operator&=(const RegionMask& o);
};

// Centered periodic finite differences of the grid's stencil order.
ScalarField dx_deriv(const ScalarField& f, int axis, int order);
ScalarField laplacian(const ScalarField& f);
// Derivative with counts (a1, a2) along the two axes, by composition of order-1/2 stencils.
ScalarField spatial_deriv(const ScalarField& f, int a1, int a2);
double integrate(const ScalarField& f);
double integrate(const ScalarField& f, const RegionMask& mask);

// Kernels without finiteness checks, used inside time stepping.
namespace detail {
void deriv1(const GridSpec& g, std::span<const double> f, std::span<double> out, int axis);
void deriv2(const GridSpec& g, std::span<const double> f, std::span<double> out, int axis);
void laplacian(const GridSpec& g, std::span<const double> f, std::span<double> out);
ScalarField d1(const ScalarField& f, int axis);
ScalarField d2(const ScalarField& f, int axis);
ScalarField lap(const ScalarField& f);
}  // namespace detail

}  // namespace wkg

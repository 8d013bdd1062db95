#pragma once

#include <string>

#include "wkg/grid.hpp"

namespace wkg {

enum class DataShape { gaussian, annular_bump };

// Initial data eps * (w_u0 g, w_u1 g, w_v0 g, w_v1 g) with a single profile g.
struct DataProfile {
  DataShape shape = DataShape::gaussian;
  double amplitude = 0.05;
  double center_x1 = 0.0, center_x2 = 0.0;
  double width = 1.0;
  double radius = 0.0;  // annulus radius for annular_bump
  double w_u0 = 1.0, w_u1 = 0.0, w_v0 = 1.0, w_v1 = 0.0;

  void validate() const;
  // g(x1, x2) without the amplitude.
  double profile(double x1, double x2) const;
  // Radius beyond which the profile is negligible (Gaussian) or zero (bump).
  double support_radius() const;
};

DataShape parse_shape(const std::string& s);
const char* name(DataShape s);

State initial_data(const GridSpec& g, const DataProfile& p);

// ||(u, v)[0]||_{H^{2h}} + ||x d_x (u, v)[0]||_{H^h} + ||x^2 d_x^2 (u, v)[0]||_{H^0}.
double smallness_norm(const State& data, int h);

}  // namespace wkg

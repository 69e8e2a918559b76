#pragma once

#include <vector>

#include "hardylab/polygon.hpp"

namespace hardylab {

/// Counter-clockwise vertex loop of the level-`level` Koch snowflake prefractal built on an
/// equilateral triangle of side `side` centred at `center`.
std::vector<Point> koch_snowflake(int level, double side, Point center = {0.0, 0.0});

inline double koch_edge_length(int level, double side) {
  double e = side;
  for (int i = 0; i < level; ++i) e /= 3.0;
  return e;
}

/// Geometry of the slit snowflake G = G' \ L: a prefractal G', a closed reference square R
/// inside it, and the slit L through the middle of R with half-length side(R)/4.
struct SlitSnowflakeSpec {
  int level = 4;
  double side = 6.0;  // side of the generating triangle
  Point r_center{0.0, 0.0};
  double r_side = 2.0;
  /// Length unit for the collar radii 1/(2m); the whole configuration scales with it.
  double unit = 1.0;

  double slit_half_length() const { return r_side / 4.0; }
  Segment slit() const {
    return {{r_center.x - slit_half_length(), r_center.y}, {r_center.x + slit_half_length(), r_center.y}};
  }
  Box r_box() const {
    return {{r_center.x - r_side / 2, r_center.y - r_side / 2}, {r_center.x + r_side / 2, r_center.y + r_side / 2}};
  }
  /// Radius of the collar L_m = L + B(0, 1/(2m)).
  double collar_radius(int m) const { return unit / (2.0 * m); }
};

}  // namespace hardylab

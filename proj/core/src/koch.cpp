#include "hardylab/koch.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hardylab {

std::vector<Point> koch_snowflake(int level, double side, Point center) {
  if (level < 0) throw std::invalid_argument("koch_snowflake: negative level");
  const double r = side / std::sqrt(3.0);
  std::vector<Point> loop;
  for (int k = 0; k < 3; ++k) {
    const double a = std::numbers::pi / 2 + k * 2 * std::numbers::pi / 3;
    loop.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
  }
  // Rotating the middle third clockwise pushes the bump outside a counter-clockwise loop.
  const double c = std::cos(-std::numbers::pi / 3);
  const double s = std::sin(-std::numbers::pi / 3);
  for (int l = 0; l < level; ++l) {
    std::vector<Point> next;
    next.reserve(loop.size() * 4);
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Point p = loop[i];
      const Point q = loop[(i + 1) % loop.size()];
      const Point d{(q.x - p.x) / 3, (q.y - p.y) / 3};
      const Point a{p.x + d.x, p.y + d.y};
      const Point b{p.x + 2 * d.x, p.y + 2 * d.y};
      const Point apex{a.x + c * d.x - s * d.y, a.y + s * d.x + c * d.y};
      next.push_back(p);
      next.push_back(a);
      next.push_back(apex);
      next.push_back(b);
    }
    loop = std::move(next);
  }
  return loop;
}

}  // namespace hardylab

#include "hardylab/test_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardylab {

Cutoff whitney_cutoff(const DyadicCube& cube, const DomainPtr& domain) {
  const int n = domain->dim();
  const double side = cube.side();
  const double collar = kCutoffCollar * side;
  const Point c = cube.center(n);
  Cutoff out{GridFunction(domain), 0.5 * domain->hv() >= collar};
  for (std::int32_t idx : dilate(*domain, cube, kStarDilation)) {
    const Point x = domain->center(static_cast<std::size_t>(idx));
    double t = std::abs(x.x - c.x);
    if (n == 2) t = std::max(t, std::abs(x.y - c.y));
    t = std::max(0.0, t - side / 2);
    out.phi[static_cast<std::size_t>(idx)] = std::max(0.0, 1.0 - t / collar);
  }
  return out;
}

GridFunction clamp01(const GridFunction& u) {
  GridFunction v = u;
  for (double& x : v.values) x = std::clamp(x, 0.0, 1.0);
  return v;
}

}  // namespace hardylab

namespace hardylab {

GridFunction union_cutoff(std::span<const DyadicCube> cubes, const DomainPtr& domain) {
  GridFunction u(domain);
  for (const DyadicCube& q : cubes) {
    const Cutoff c = whitney_cutoff(q, domain);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::max(u[i], c.phi[i]);
  }
  return u;
}

GridFunction distance_ramp(const DomainPtr& domain, double width) {
  if (!(width > 0)) throw std::invalid_argument("distance_ramp: width must be positive");
  GridFunction u(domain);
  const auto& dist = domain->dist();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::clamp((dist[i] - domain->hv()) / width, 0.0, 1.0);
  return u;
}

}  // namespace hardylab

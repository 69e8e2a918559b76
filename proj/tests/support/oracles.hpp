#pragma once

// Independent reference computations used by the unit and acceptance tests. Nothing here goes
// through the optimized code paths of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hardylab/capacity.hpp"
#include "hardylab/domain.hpp"
#include "hardylab/grid_function.hpp"
#include "hardylab/params.hpp"

namespace oracle {

using hardylab::DomainPtr;
using hardylab::EnergyParams;
using hardylab::GridFunction;
using hardylab::Point;

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Plain double loop over ordered pairs, long double accumulation.
inline double seminorm_p(const GridFunction& u, const EnergyParams& par) {
  const auto& d = *u.domain;
  const double hn = d.cell_volume();
  long double sum = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (i == j) continue;
      const double r = distance(d.center(i), d.center(j));
      sum += static_cast<long double>(hn * hn * std::pow(std::abs(u[i] - u[j]), par.p) /
                                      std::pow(r, par.kernel_exponent()));
    }
  return static_cast<double>(sum);
}

/// p = 2 capacity by a dense solve: fixed 1 on K, 0 on the boundary layer, minimise over the rest.
struct DenseCapacity {
  double value = 0;
  std::vector<double> u;
};

inline DenseCapacity dense_capacity(const DomainPtr& dom, const std::vector<std::int32_t>& k,
                                    const EnergyParams& par) {
  const auto& d = *dom;
  const std::size_t n = d.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a(i, j) = 1.0 / std::pow(distance(d.center(i), d.center(j)), par.kernel_exponent());
  std::vector<int> state(n, 0);  // 0 free, 1 on K, 2 pinned to zero
  for (std::size_t i = 0; i < n; ++i)
    if (d.in_boundary_layer(i)) state[i] = 2;
  for (auto c : k) state[static_cast<std::size_t>(c)] = 1;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i)
    if (state[i] == 0) free.push_back(i);
  const auto m = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd l(m, m);
  Eigen::VectorXd b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t i = free[static_cast<std::size_t>(r)];
    b(r) = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (state[j] == 1) b(r) += a(i, j);
    for (Eigen::Index c = 0; c < m; ++c) l(r, c) = -a(i, free[static_cast<std::size_t>(c)]);
    l(r, r) = a.row(static_cast<Eigen::Index>(i)).sum();
  }
  DenseCapacity out;
  out.u.assign(n, 0.0);
  for (auto c : k) out.u[static_cast<std::size_t>(c)] = 1.0;
  if (m > 0) {
    const Eigen::VectorXd x = l.ldlt().solve(b);
    for (Eigen::Index r = 0; r < m; ++r) out.u[free[static_cast<std::size_t>(r)]] = x(r);
  }
  out.value = seminorm_p(GridFunction(dom, out.u), par);
  return out;
}

/// Exterior weight of the square [0, side]^2 at x by polar quadrature: (1/sp) * integral of
/// rho(theta)^{-sp}, with rho the distance along the ray to the boundary.
inline double square_exterior_weight(Point x, double side, double sp) {
  const auto rho = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    double r = INFINITY;
    if (c > 0) r = std::min(r, (side - x.x) / c);
    if (c < 0) r = std::min(r, -x.x / c);
    if (s > 0) r = std::min(r, (side - x.y) / s);
    if (s < 0) r = std::min(r, -x.y / s);
    return r;
  };
  std::vector<double> cuts = {std::atan2(-x.y, -x.x), std::atan2(-x.y, side - x.x), std::atan2(side - x.y, side - x.x),
                              std::atan2(side - x.y, -x.x)};
  for (double& t : cuts)
    if (t < 0) t += 2 * std::numbers::pi;
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(cuts.front() + 2 * std::numbers::pi);
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return std::pow(rho(t), -sp); }, cuts[i], cuts[i + 1], 15, 1e-14);
  return total / sp;
}

inline double interval_exterior_weight(double x, double length, double sp) {
  return (std::pow(x, -sp) + std::pow(length - x, -sp)) / sp;
}

/// Maximal function by scanning every cell for every admissible radius.
inline std::vector<double> maximal(const GridFunction& u) {
  const auto& d = *u.domain;
  const double h = d.hv();
  std::vector<double> out(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    double best = std::abs(u[i]);
    for (int k = 1; k * h < d.dist()[i]; ++k) {
      const double r = k * h;
      double sum = 0;
      int count = 0;
      for (std::size_t j = 0; j < d.size(); ++j)
        if (distance(d.center(i), d.center(j)) < r) {
          sum += std::abs(u[j]);
          ++count;
        }
      best = std::max(best, sum / count);
    }
    out[i] = best;
  }
  return out;
}

/// Area of the level-L Koch snowflake on a triangle of the given side.
inline double koch_area(int level, double side) {
  double area = std::sqrt(3.0) / 4.0 * side * side;
  const double tri = area;
  for (int k = 1; k <= level; ++k) area += 3.0 * std::pow(4.0, k - 1) * tri / std::pow(9.0, k);
  return area;
}

/// Whitney owner of each cell of the square [0, side]^2 by walking the dyadic chain from the
/// coarsest generation: the first cube with diam <= dist <= 4 diam. Returns (k, ci, cj) or k = -1.
struct DyadicId {
  int k = -1;
  int ci = 0;
  int cj = 0;
};

inline std::vector<DyadicId> square_whitney_owner(const hardylab::GridDomain& d, double side, int finest) {
  std::vector<DyadicId> out(d.size());
  for (std::size_t c = 0; c < d.size(); ++c) {
    const Point x = d.center(c);
    for (int k = 0; k <= finest; ++k) {
      const double len = std::ldexp(1.0, -k);
      const int ci = static_cast<int>(std::floor(x.x / len));
      const int cj = static_cast<int>(std::floor(x.y / len));
      const double x0 = ci * len, y0 = cj * len;
      if (x0 < 0 || y0 < 0 || x0 + len > side || y0 + len > side) continue;
      const double dist = std::min({x0, y0, side - x0 - len, side - y0 - len});
      const double diam = std::sqrt(2.0) * len;
      if (diam <= dist && dist <= 4 * diam) {
        out[c] = {k, ci, cj};
        break;
      }
    }
  }
  return out;
}

/// k with 2^k < |v| <= 2^{k+1}, by direct comparison.
inline int level(double v) {
  v = std::abs(v);
  int k = 0;
  while (std::ldexp(1.0, k) >= v) --k;
  while (std::ldexp(1.0, k + 1) < v) ++k;
  return k;
}

/// Piecewise definition of the k-th truncation.
inline double truncation(double v, int k) {
  v = std::abs(v);
  if (v >= std::ldexp(1.0, k + 1)) return 1.0;
  if (v <= std::ldexp(1.0, k)) return 0.0;
  return v / std::ldexp(1.0, k) - 1.0;
}

/// Exhaustive scan of |u_k(x) - u_k(y)| <= 2 2^{-j} |u(x) - u(y)| over x in A_i (or the zero
/// set), y in A_j, i <= k <= j. Returns the number of violations and the pairs examined.
struct PairScan {
  std::size_t violations = 0;
  std::size_t checked = 0;
};

inline PairScan pair_inequality(const GridFunction& u) {
  PairScan out;
  const std::size_t n = u.size();
  std::vector<int> lv(n);
  for (std::size_t i = 0; i < n; ++i) lv[i] = u[i] == 0.0 ? std::numeric_limits<int>::min() : level(u[i]);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y || u[y] == 0.0 || lv[x] > lv[y]) continue;
      const int j = lv[y];
      const int lo = u[x] == 0.0 ? j - 3 : lv[x];
      for (int k = lo; k <= j; ++k) {
        const double lhs = std::abs(truncation(u[x], k) - truncation(u[y], k));
        const double rhs = 2.0 * std::ldexp(1.0, -j) * std::abs(u[x] - u[y]);
        ++out.checked;
        if (lhs > rhs * (1 + 8 * eps) + 8 * eps) ++out.violations;
      }
    }
  return out;
}

/// Values uniform in [lo, hi) on cells outside the boundary layer.
inline GridFunction random_interior(const DomainPtr& d, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  GridFunction u(d);
  for (std::size_t c = 0; c < d->size(); ++c)
    if (!d->in_boundary_layer(c)) u[c] = dist(rng);
  return u;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle

#include "hardylab/weights.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>

#include "hardylab/parallel.hpp"

namespace hardylab {

namespace {

/// Integral of cos(t)^a over [0, phi] for |phi| < pi/2, via the incomplete beta function.
double cos_power_integral(double phi, double a) {
  const double s = std::sin(phi);
  const double v = 0.5 * boost::math::beta(0.5, 0.5 * (a + 1.0), s * s);
  return phi < 0 ? -v : v;
}

double side_integral(double d, double t0, double t1, double sp) {
  return std::pow(d, -sp) * (cos_power_integral(std::atan2(t1, d), sp) - cos_power_integral(std::atan2(t0, d), sp));
}

struct CellBracketer {
  int n;
  double alpha;
  double tol;
  int max_depth;

  /// Bracket for the integral of |x - y|^{-alpha} over the cell centred at offset (cx, cy)
  /// from x with side delta.
  void add(double cx, double cy, double delta, int depth, double& lo, double& hi) const {
    const double r = std::hypot(cx, cy);
    const double reach = 0.5 * delta * (n == 1 ? 1.0 : std::numbers::sqrt2);
    const double vol = n == 1 ? delta : delta * delta;
    if (r > reach * 1.0000001) {
      const double m = vol * std::pow(r, -alpha);
      const double dmin = r - reach;
      const double q = r / dmin;
      const double err = m * n * delta * delta * alpha * (alpha + 1.0) / (24.0 * dmin * dmin) * std::pow(q, alpha);
      if (2 * err <= tol * m || depth >= max_depth) {
        const double crude_lo = vol * std::pow(r + reach, -alpha);
        const double crude_hi = vol * std::pow(dmin, -alpha);
        lo += std::max(m - err, crude_lo);
        hi += std::min(m + err, crude_hi);
        return;
      }
    } else if (depth >= max_depth) {
      throw std::logic_error("exterior cell contains the evaluation point");
    }
    const double q = delta / 4;
    if (n == 1) {
      add(cx - q, cy, delta / 2, depth + 1, lo, hi);
      add(cx + q, cy, delta / 2, depth + 1, lo, hi);
      return;
    }
    for (double ox : {-q, q})
      for (double oy : {-q, q}) add(cx + ox, cy + oy, delta / 2, depth + 1, lo, hi);
  }
};

}  // namespace

double unit_sphere_measure(int n) { return n == 1 ? 2.0 : 2.0 * std::numbers::pi; }

double rectangle_exterior_integral(double x0, double x1, double y0, double y1, double sp) {
  if (!(x0 < 0 && x1 > 0 && y0 < 0 && y1 > 0)) throw std::invalid_argument("origin must lie inside the rectangle");
  double total = side_integral(x1, y0, y1, sp);   // right
  total += side_integral(-x0, -y1, -y0, sp);      // left
  total += side_integral(y1, -x1, -x0, sp);       // top
  total += side_integral(-y0, x0, x1, sp);        // bottom
  return total / sp;
}

WeightField hardy_weight(const GridDomain& domain, const EnergyParams& params) {
  WeightField w;
  w.kind = WeightKind::Hardy;
  w.values.resize(domain.size());
  for (std::size_t c = 0; c < domain.size(); ++c) w.values[c] = std::pow(domain.dist()[c], -params.sp());
  w.lower = w.values;
  w.upper = w.values;
  return w;
}

WeightField exterior_weight(const GridDomain& domain, const EnergyParams& params, const ExteriorOptions& opts) {
  const int n = domain.dim();
  const double h = domain.hv();
  const double sp = params.sp();
  const CellBracketer bracketer{n, params.kernel_exponent(), opts.cell_tolerance, opts.max_depth};

  std::vector<Point> holes;  // centres of unoccupied cells inside the lattice box
  for (int j = 0; j < domain.ny(); ++j)
    for (int i = 0; i < domain.nx(); ++i)
      if (!domain.occupied(i, j))
        holes.push_back({(domain.i0() + i + 0.5) * h, n == 1 ? 0.0 : (domain.j0() + j + 0.5) * h});

  const double bx0 = domain.i0() * h, bx1 = (domain.i0() + domain.nx()) * h;
  const double by0 = domain.j0() * h, by1 = (domain.j0() + domain.ny()) * h;

  WeightField w;
  w.kind = WeightKind::Exterior;
  w.values.resize(domain.size());
  w.lower.resize(domain.size());
  w.upper.resize(domain.size());
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (domain.size() + kChunk - 1) / kChunk;
  for_each_chunk(chunks, opts.workers, [&](std::size_t ch) {
    const std::size_t end = std::min(domain.size(), (ch + 1) * kChunk);
    for (std::size_t c = ch * kChunk; c < end; ++c) {
      const Point x = domain.center(c);
      double far = 0.0;
      if (n == 1)
        far = (std::pow(x.x - bx0, -sp) + std::pow(bx1 - x.x, -sp)) / sp;
      else
        far = rectangle_exterior_integral(bx0 - x.x, bx1 - x.x, by0 - x.y, by1 - x.y, sp);
      double lo = far * (1 - 1e-12), hi = far * (1 + 1e-12);
      for (const Point& y : holes) bracketer.add(y.x - x.x, y.y - x.y, h, 0, lo, hi);
      w.lower[c] = lo;
      w.upper[c] = hi;
      w.values[c] = 0.5 * (lo + hi);
    }
  });
  double tol = 0.0;
  for (std::size_t c = 0; c < domain.size(); ++c) tol = std::max(tol, (w.upper[c] - w.lower[c]) / w.lower[c]);
  w.tolerance = tol;
  return w;
}

WeightField weight_field(const GridDomain& domain, const EnergyParams& params, WeightKind kind) {
  return kind == WeightKind::Hardy ? hardy_weight(domain, params) : exterior_weight(domain, params);
}

double weighted_mass(const GridFunction& u, const WeightField& w, double p) {
  const double vol = u.domain->cell_volume();
  CompensatedSum s;
  for (std::size_t c = 0; c < u.size(); ++c)
    if (u[c] != 0.0) s.add(std::pow(std::abs(u[c]), p) * w.values[c]);
  return s.value() * vol;
}

Bracket weighted_mass_bracket(const GridFunction& u, const WeightField& w, double p) {
  const double vol = u.domain->cell_volume();
  CompensatedSum lo, hi;
  for (std::size_t c = 0; c < u.size(); ++c) {
    if (u[c] == 0.0) continue;
    const double a = std::pow(std::abs(u[c]), p);
    lo.add(a * w.lower[c]);
    hi.add(a * w.upper[c]);
  }
  return {lo.value() * vol, hi.value() * vol};
}

}  // namespace hardylab

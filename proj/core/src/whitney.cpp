#include "hardylab/whitney.hpp"

#include <algorithm>
#include <stdexcept>

namespace hardylab {

namespace {

/// Local cell-index range [a, b) covered by a dyadic cube along one axis.
struct Span {
  int a;
  int b;
};

Span cube_span(int corner, int k, int cell_gen, int origin) {
  const int width = 1 << (cell_gen - k);
  return {corner * width - origin, (corner + 1) * width - origin};
}

class Builder {
 public:
  Builder(const GridDomain& d, int finest) : d_(d), finest_(finest), cell_gen_(d.cell_generation()) {}

  WhitneyDecomposition run() {
    WhitneyDecomposition w;
    w.finest_generation = finest_;
    w.owner.assign(d_.size(), -1);
    const int extent = std::max(d_.nx(), d_.dim() == 1 ? 1 : d_.ny());
    int levels = 0;
    while ((1 << levels) < extent) ++levels;
    const int k0 = std::min(cell_gen_ - levels - 1, finest_);
    w.coarsest_generation = k0;
    const int width = 1 << (cell_gen_ - k0);
    const auto floor_div = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    const int ca = floor_div(d_.i0(), width), cb = floor_div(d_.i0() + d_.nx() - 1, width);
    const int ra = d_.dim() == 1 ? 0 : floor_div(d_.j0(), width);
    const int rb = d_.dim() == 1 ? 0 : floor_div(d_.j0() + d_.ny() - 1, width);
    for (int cj = ra; cj <= rb; ++cj)
      for (int ci = ca; ci <= cb; ++ci) visit({k0, ci, cj}, w);
    return w;
  }

 private:
  void visit(const DyadicCube& q, WhitneyDecomposition& w) {
    const Span sx = cube_span(q.ci, q.k, cell_gen_, d_.i0());
    const Span sy = d_.dim() == 1 ? Span{0, 1} : cube_span(q.cj, q.k, cell_gen_, d_.j0());
    const std::int64_t occupied = d_.count_occupied(sx.a, sx.b, sy.a, sy.b);
    if (occupied == 0) return;
    const std::int64_t full = static_cast<std::int64_t>(sx.b - sx.a) * (sy.b - sy.a);
    const double dist = cube_boundary_distance(d_, q);
    const double diam = q.diam(d_.dim());
    if (occupied == full && dist >= diam && dist <= 4 * diam) {
      emit(q, dist, false, w);
      return;
    }
    if (q.k >= finest_) {
      emit(q, dist, true, w);
      return;
    }
    const int jn = d_.dim() == 1 ? 1 : 2;
    for (int dj = 0; dj < jn; ++dj)
      for (int di = 0; di < 2; ++di) visit({q.k + 1, 2 * q.ci + di, d_.dim() == 1 ? 0 : 2 * q.cj + dj}, w);
  }

  void emit(const DyadicCube& q, double dist, bool truncated, WhitneyDecomposition& w) {
    WhitneyCube c{q, dist, truncated, cube_cells(d_, q)};
    const auto id = static_cast<std::int32_t>(w.cubes.size());
    for (std::int32_t cell : c.cells) w.owner[cell] = id;
    w.cubes.push_back(std::move(c));
  }

  const GridDomain& d_;
  int finest_;
  int cell_gen_;
};

/// Largest number of closed dilates factor*Q (non-truncated cubes) sharing a point. The deepest
/// point of a clique of boxes is (max lo.x, max lo.y), so it suffices to probe points built from
/// the lower corners of pairwise intersecting boxes.
int max_dilate_depth(const WhitneyDecomposition& w, int n, double factor) {
  std::vector<Box> boxes;
  for (const WhitneyCube& q : w.cubes) {
    if (q.boundary_truncated) continue;
    const Point c = q.cube.center(n);
    const double half = factor * q.cube.side() / 2;
    boxes.push_back({{c.x - half, n == 1 ? 0.0 : c.y - half}, {c.x + half, n == 1 ? 0.0 : c.y + half}});
  }
  std::vector<std::size_t> order(boxes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return boxes[a].lo.x < boxes[b].lo.x; });
  const auto contains = [](const Box& b, Point p) {
    return b.lo.x <= p.x && p.x <= b.hi.x && b.lo.y <= p.y && p.y <= b.hi.y;
  };
  const auto meets = [](const Box& a, const Box& b) {
    return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
  };
  int best = boxes.empty() ? 0 : 1;
  std::vector<std::size_t> near;
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    near.clear();
    for (std::size_t b : order) {
      if (boxes[b].lo.x > boxes[a].hi.x) break;
      if (meets(boxes[a], boxes[b])) near.push_back(b);
    }
    for (std::size_t b : near) {
      const Point p{boxes[a].lo.x, boxes[b].lo.y};
      if (!contains(boxes[a], p)) continue;
      int depth = 0;
      for (std::size_t c : near) depth += contains(boxes[c], p);
      best = std::max(best, depth);
    }
  }
  return best;
}

}  // namespace

Box DyadicCube::box(int n) const {
  const Point c = corner();
  if (n == 1) return {{c.x, 0.0}, {c.x + side(), 0.0}};
  return {c, {c.x + side(), c.y + side()}};
}

std::size_t WhitneyDecomposition::truncated_count() const {
  return static_cast<std::size_t>(
      std::count_if(cubes.begin(), cubes.end(), [](const WhitneyCube& c) { return c.boundary_truncated; }));
}

std::vector<std::size_t> WhitneyDecomposition::generation(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < cubes.size(); ++q)
    if (!cubes[q].boundary_truncated && cubes[q].cube.k == k) out.push_back(q);
  return out;
}

double cube_boundary_distance(const GridDomain& domain, const DyadicCube& cube) {
  return min_distance(cube.box(domain.dim()), domain.boundary());
}

std::vector<std::int32_t> cube_cells(const GridDomain& domain, const DyadicCube& cube) {
  const int g = domain.cell_generation();
  if (cube.k > g) throw std::invalid_argument("cube finer than a grid cell");
  const Span sx = cube_span(cube.ci, cube.k, g, domain.i0());
  const Span sy = domain.dim() == 1 ? Span{0, 1} : cube_span(cube.cj, cube.k, g, domain.j0());
  std::vector<std::int32_t> out;
  for (int j = std::max(sy.a, 0); j < std::min(sy.b, domain.ny()); ++j)
    for (int i = std::max(sx.a, 0); i < std::min(sx.b, domain.nx()); ++i)
      if (const auto c = domain.index(i, j); c >= 0) out.push_back(c);
  return out;
}

WhitneyDecomposition whitney_decompose(const GridDomain& domain, int finest_generation) {
  if (finest_generation > domain.cell_generation())
    throw std::invalid_argument("finest Whitney generation is finer than the grid");
  WhitneyDecomposition w = Builder(domain, finest_generation).run();
  w.overlap_constant = max_dilate_depth(w, domain.dim(), kDoubleStarDilation);
  return w;
}

WhitneyDecomposition whitney_decompose(const GridDomain& domain) {
  return whitney_decompose(domain, domain.cell_generation());
}

std::vector<std::int32_t> dilate(const GridDomain& domain, const DyadicCube& cube, double factor) {
  const int n = domain.dim();
  const double h = domain.hv();
  const Point c = cube.center(n);
  const double half = factor * cube.side() / 2 + 1e-9 * h;
  const auto lo = [&](double x, int origin) { return static_cast<int>(std::floor((x - half) / h - 0.5)) - origin; };
  const auto hi = [&](double x, int origin) { return static_cast<int>(std::ceil((x + half) / h - 0.5)) - origin; };
  const int ia = lo(c.x, domain.i0()), ib = hi(c.x, domain.i0());
  const int ja = n == 1 ? 0 : lo(c.y, domain.j0()), jb = n == 1 ? 0 : hi(c.y, domain.j0());
  std::vector<std::int32_t> out;
  for (int j = std::max(ja, 0); j <= std::min(jb, domain.ny() - 1); ++j)
    for (int i = std::max(ia, 0); i <= std::min(ib, domain.nx() - 1); ++i) {
      const auto idx = domain.index(i, j);
      if (idx < 0) continue;
      const Point p = domain.center(static_cast<std::size_t>(idx));
      if (std::abs(p.x - c.x) <= half && std::abs(p.y - c.y) <= half) out.push_back(idx);
    }
  return out;
}

std::vector<int> double_star_overlap(const GridDomain& domain, const WhitneyDecomposition& w) {
  std::vector<int> count(domain.size(), 0);
  for (const WhitneyCube& q : w.cubes) {
    if (q.boundary_truncated) continue;
    for (std::int32_t c : dilate(domain, q.cube, kDoubleStarDilation)) ++count[c];
  }
  return count;
}

WhitneyValidation validate_whitney(const GridDomain& domain, const WhitneyDecomposition& w) {
  WhitneyValidation v;
  v.cubes = w.cubes.size();
  std::vector<int> cover(domain.size(), 0);
  for (const WhitneyCube& q : w.cubes) {
    for (std::int32_t c : q.cells) ++cover[c];
    if (q.boundary_truncated) {
      ++v.truncated;
      continue;
    }
    const double dist = cube_boundary_distance(domain, q.cube);
    const double diam = q.cube.diam(domain.dim());
    if (!(diam <= dist && dist <= 4 * diam)) ++v.distance_violations;
  }
  for (int c : cover) {
    if (c == 0) ++v.uncovered_cells;
    if (c > 1) ++v.multiply_covered_cells;
  }
  return v;
}

}  // namespace hardylab

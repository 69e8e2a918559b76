#include "hardylab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hardylab {

namespace {

struct Offset {
  int a;
  int b;
  long r2;
};

std::vector<Offset> sorted_offsets(int n, int reach) {
  std::vector<Offset> out;
  const int breach = n == 1 ? 0 : reach;
  for (int b = -breach; b <= breach; ++b)
    for (int a = -reach; a <= reach; ++a) {
      const long r2 = static_cast<long>(a) * a + static_cast<long>(b) * b;
      if (r2 < static_cast<long>(reach) * reach) out.push_back({a, b, r2});
    }
  std::stable_sort(out.begin(), out.end(), [](const Offset& x, const Offset& y) { return x.r2 < y.r2; });
  return out;
}

}  // namespace

GridFunction local_maximal(const GridFunction& u) {
  const GridDomain& d = *u.domain;
  const double h = d.hv();
  // Largest radius index: k with k h < dist.
  std::vector<int> kmax(d.size());
  int reach = 1;
  for (std::size_t c = 0; c < d.size(); ++c) {
    const double q = d.dist()[c] / h;
    int k = static_cast<int>(std::ceil(q)) - 1;
    while (k >= 1 && k >= q) --k;
    while ((k + 1) < q) ++k;
    kmax[c] = std::max(k, 1);
    reach = std::max(reach, kmax[c]);
  }
  const std::vector<Offset> offsets = sorted_offsets(d.dim(), reach);

  GridFunction m(u.domain);
  for (std::size_t c = 0; c < d.size(); ++c) {
    const CellIndex& x = d.cell(c);
    const long limit = static_cast<long>(kmax[c]) * kmax[c];
    double sum = 0.0, best = std::abs(u[c]);
    long count = 0;
    int radius = 1;  // averages are taken once all offsets with r2 < radius^2 are in
    for (const Offset& o : offsets) {
      if (o.r2 >= limit) break;
      while (o.r2 >= static_cast<long>(radius) * radius) {
        if (count > 0) best = std::max(best, sum / static_cast<double>(count));
        ++radius;
      }
      const std::int32_t j = d.index(x.i + o.a, x.j + o.b);
      if (j < 0) continue;
      sum += std::abs(u[static_cast<std::size_t>(j)]);
      ++count;
    }
    if (count > 0) best = std::max(best, sum / static_cast<double>(count));
    m[c] = best;
  }
  return m;
}

double mean_split_constant(int n) { return n == 1 ? 4.0 : 4.0 * std::numbers::pi; }

double cube_average(const GridFunction& u, const WhitneyCube& q) {
  double s = 0.0;
  for (std::int32_t c : q.cells) s += u[static_cast<std::size_t>(c)];
  return q.cells.empty() ? 0.0 : s / static_cast<double>(q.cells.size());
}

MeanSplit mean_split(const GridFunction& u, const WhitneyDecomposition& w) {
  MeanSplit out;
  for (std::size_t i = 0; i < w.cubes.size(); ++i) {
    if (w.cubes[i].boundary_truncated) continue;
    (cube_average(u, w.cubes[i]) < 0.5 ? out.low : out.high).push_back(i);
  }
  return out;
}

}  // namespace hardylab

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hardylab/domain.hpp"

namespace hardylab {

/// Half-open dyadic cube corner + [0, 2^-k)^n with corner = (ci, cj) * 2^-k.
struct DyadicCube {
  int k = 0;
  int ci = 0;
  int cj = 0;

  double side() const { return std::ldexp(1.0, -k); }
  double diam(int n) const { return std::sqrt(static_cast<double>(n)) * side(); }
  Point corner() const { return {ci * side(), cj * side()}; }
  Point center(int n) const { return {(ci + 0.5) * side(), n == 1 ? 0.0 : (cj + 0.5) * side()}; }
  Box box(int n) const;
  friend bool operator==(const DyadicCube&, const DyadicCube&) = default;
};

struct WhitneyCube {
  DyadicCube cube;
  double dist = 0.0;  // dist(Q, boundary), exact
  /// No admissible cube existed at the finest generation; excluded from per-cube statistics.
  bool boundary_truncated = false;
  std::vector<std::int32_t> cells;
};

inline constexpr double kStarDilation = 17.0 / 16.0;
inline constexpr double kDoubleStarDilation = 9.0 / 8.0;

class WhitneyDecomposition {
 public:
  std::vector<WhitneyCube> cubes;
  std::vector<std::int32_t> owner;  // cell -> cube index
  int finest_generation = 0;
  int coarsest_generation = 0;
  /// Maximum pointwise count of the closed dilates Q** = (9/8)Q over non-truncated cubes.
  int overlap_constant = 0;

  std::size_t truncated_count() const;
  /// Indices of non-truncated cubes with generation k (side 2^-k).
  std::vector<std::size_t> generation(int k) const;
};

/// Greedy coarse-to-fine selection on the dyadic mesh: the first cube along each chain that lies
/// inside the domain and satisfies diam(Q) <= dist(Q, dG) <= 4 diam(Q) is emitted; cells left
/// uncovered at `finest_generation` become boundary-truncated cubes.
WhitneyDecomposition whitney_decompose(const GridDomain& domain, int finest_generation);
WhitneyDecomposition whitney_decompose(const GridDomain& domain);

/// Occupied cells whose centres lie in the closed cube scaled by `factor` about its centre.
std::vector<std::int32_t> dilate(const GridDomain& domain, const DyadicCube& cube, double factor);

/// Cells of a dyadic cube that are occupied.
std::vector<std::int32_t> cube_cells(const GridDomain& domain, const DyadicCube& cube);

double cube_boundary_distance(const GridDomain& domain, const DyadicCube& cube);

struct WhitneyValidation {
  std::size_t cubes = 0;
  std::size_t truncated = 0;
  std::size_t distance_violations = 0;  // non-truncated cubes failing diam <= dist <= 4 diam
  std::size_t uncovered_cells = 0;
  std::size_t multiply_covered_cells = 0;
  bool ok() const { return distance_violations == 0 && uncovered_cells == 0 && multiply_covered_cells == 0; }
};

WhitneyValidation validate_whitney(const GridDomain& domain, const WhitneyDecomposition& w);

/// Per-cell count of Q**-dilates over non-truncated cubes (cell centres only).
std::vector<int> double_star_overlap(const GridDomain& domain, const WhitneyDecomposition& w);

}  // namespace hardylab

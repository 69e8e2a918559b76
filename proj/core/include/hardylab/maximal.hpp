#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hardylab/grid_function.hpp"
#include "hardylab/whitney.hpp"

namespace hardylab {

/// Local maximal function: at each cell the largest average of |u| over the cells whose centres
/// lie in the open ball B(x, r), for r = h, 2h, ... with r < dist(x, dG). The radius-h ball is
/// the single cell, so M u >= |u|.
GridFunction local_maximal(const GridFunction& u);

/// Ball-volume ratio |Q| / |B(x, diam Q)|-type constant of the mean-split argument: 4 pi in 2-D,
/// 4 in 1-D.
double mean_split_constant(int n);

struct MeanSplit {
  std::vector<std::size_t> low;   // <u>_Q < 1/2
  std::vector<std::size_t> high;  // <u>_Q >= 1/2
};

/// Partition of the non-truncated Whitney cubes by their cell average.
MeanSplit mean_split(const GridFunction& u, const WhitneyDecomposition& w);

double cube_average(const GridFunction& u, const WhitneyCube& q);

}  // namespace hardylab

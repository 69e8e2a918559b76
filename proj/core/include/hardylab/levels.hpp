#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hardylab/grid_function.hpp"

namespace hardylab {

/// Dyadic level structure of a grid function: E_k = {|u| > 2^k}, A_k = E_k \ E_{k+1},
/// F = {u = 0}, and the truncations u_k.
struct LevelDecomposition {
  GridFunction u;
  std::vector<std::int32_t> zero_set;
  /// Nonempty annuli keyed by k.
  std::map<int, std::vector<std::int32_t>> annuli;

  /// Level of a cell: k with 2^k < |u| <= 2^{k+1}; meaningless on F.
  static int level_of(double value);

  bool empty() const { return annuli.empty(); }
  int min_level() const { return annuli.begin()->first; }
  int max_level() const { return annuli.rbegin()->first; }

  std::vector<std::int32_t> level_set(int k) const;
  /// min(1, max(0, |u| / 2^k - 1)).
  GridFunction truncation(int k) const;
};

LevelDecomposition level_truncation(const GridFunction& u);

}  // namespace hardylab

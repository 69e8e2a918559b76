#include "hardylab/levels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardylab {

int LevelDecomposition::level_of(double value) {
  int e = 0;
  const double m = std::frexp(std::abs(value), &e);
  return m == 0.5 ? e - 2 : e - 1;
}

std::vector<std::int32_t> LevelDecomposition::level_set(int k) const {
  std::vector<std::int32_t> out;
  for (auto it = annuli.lower_bound(k); it != annuli.end(); ++it) out.insert(out.end(), it->second.begin(), it->second.end());
  std::sort(out.begin(), out.end());
  return out;
}

GridFunction LevelDecomposition::truncation(int k) const {
  GridFunction t(u.domain);
  for (std::size_t c = 0; c < u.size(); ++c)
    t[c] = std::clamp(std::ldexp(std::abs(u[c]), -k) - 1.0, 0.0, 1.0);
  return t;
}

LevelDecomposition level_truncation(const GridFunction& u) {
  LevelDecomposition d;
  d.u = u;
  for (std::size_t c = 0; c < u.size(); ++c) {
    if (!std::isfinite(u[c])) throw std::invalid_argument("level_truncation: non-finite value");
    const auto idx = static_cast<std::int32_t>(c);
    if (u[c] == 0.0)
      d.zero_set.push_back(idx);
    else
      d.annuli[LevelDecomposition::level_of(u[c])].push_back(idx);
  }
  return d;
}

}  // namespace hardylab

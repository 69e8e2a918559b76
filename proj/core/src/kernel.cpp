#include "hardylab/kernel.hpp"

#include <cmath>

namespace hardylab {

KernelTable::KernelTable(int nx, int ny, const EnergyParams& params, double h)
    : nx_(nx), ny_(ny), scale_(std::pow(h, params.homogeneity())), table_(static_cast<std::size_t>(nx) * ny, 0.0) {
  const double alpha = params.kernel_exponent();
  for (int b = 0; b < ny; ++b)
    for (int a = 0; a < nx; ++a) {
      if (a == 0 && b == 0) continue;
      const double r2 = static_cast<double>(a) * a + static_cast<double>(b) * b;
      table_[static_cast<std::size_t>(b) * nx + a] = std::pow(r2, -alpha / 2);
    }
}

}  // namespace hardylab

#pragma once

#include <cstddef>
#include <vector>

#include "hardylab/domain.hpp"
#include "hardylab/params.hpp"

namespace hardylab {

/// Interaction weights r^{-(n+sp)} indexed by the absolute lattice offset (a, b) in cell units.
/// The physical pair weight is scale() * at(a, b) with scale() = h^{2n} h^{-(n+sp)} = h^{n-sp}.
class KernelTable {
 public:
  KernelTable() = default;
  KernelTable(int nx, int ny, const EnergyParams& params, double h);

  double at(int a, int b) const { return table_[static_cast<std::size_t>(b) * nx_ + a]; }
  double scale() const { return scale_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  double scale_ = 1.0;
  std::vector<double> table_;
};

}  // namespace hardylab

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "hardylab/domain.hpp"
#include "hardylab/kernel.hpp"

namespace hardylab {

/// Applies the dimensionless pair-weight matrix W (w_ij = kernel offset weight between occupied
/// cells i != j) by zero-padded FFT convolution on the domain's bounding lattice.
/// A single instance must not be applied concurrently.
class LatticeConvolution {
 public:
  LatticeConvolution(const GridDomain& domain, const KernelTable& kernel);
  ~LatticeConvolution();
  LatticeConvolution(const LatticeConvolution&) = delete;
  LatticeConvolution& operator=(const LatticeConvolution&) = delete;

  /// out_i = sum_{j != i} w_ij in_j over occupied cells.
  void apply(std::span<const double> in, std::span<double> out) const;

  /// Row sums W 1.
  const std::vector<double>& degree() const { return degree_; }

 private:
  struct Plan;
  const GridDomain* domain_;
  std::unique_ptr<Plan> plan_;
  std::vector<double> degree_;
};

}  // namespace hardylab

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "hardylab/domain.hpp"

namespace hardylab {

using DomainPtr = std::shared_ptr<const GridDomain>;

inline DomainPtr share(GridDomain d) { return std::make_shared<const GridDomain>(std::move(d)); }

/// Real values on the occupied cells of a domain; every other cell of R^n carries 0, so a
/// GridFunction is simultaneously u and its zero extension.
struct GridFunction {
  DomainPtr domain;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(DomainPtr d, double fill = 0.0) : domain(std::move(d)), values(domain->size(), fill) {}
  GridFunction(DomainPtr d, std::vector<double> v) : domain(std::move(d)), values(std::move(v)) {
    if (values.size() != domain->size()) throw std::invalid_argument("GridFunction: value count mismatch");
  }

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t c) { return values[c]; }
  double operator[](std::size_t c) const { return values[c]; }
  std::span<const double> view() const { return values; }
};

inline GridFunction indicator(const DomainPtr& d, std::span<const std::int32_t> cells) {
  GridFunction u(d);
  for (std::int32_t c : cells) u[static_cast<std::size_t>(c)] = 1.0;
  return u;
}

}  // namespace hardylab

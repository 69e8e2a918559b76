#pragma once

#include <vector>

#include "hardylab/grid_function.hpp"
#include "hardylab/kernel.hpp"
#include "hardylab/params.hpp"

namespace hardylab {

enum class SummationMode { Fixed, Compensated };

/// Closed interval [lo, hi] of certified bounds.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Discrete Gagliardo energy on one domain: direct double sum over occupied cell centres with
/// weight h^{2n} |x_i - x_j|^{-(n+sp)}.
struct EnergyForm {
  EnergyParams params;
  DomainPtr domain;
  KernelTable kernel;
  SummationMode mode = SummationMode::Compensated;
  /// Threads for the pair sum; results do not depend on this value.
  int workers = 1;

  EnergyForm() = default;
  EnergyForm(DomainPtr d, const EnergyParams& p, SummationMode m = SummationMode::Compensated, int workers = 1);
};

/// p-th power of the discrete seminorm, sum over ordered pairs i != j.
double seminorm_p(const GridFunction& u, const EnergyForm& form);

/// Gradient of seminorm_p with respect to the cell values (requires p > 1).
std::vector<double> seminorm_gradient(const GridFunction& u, const EnergyForm& form);

/// Energy of the zero extension over R^n: |u|^p_G + 2 sum_i |u_i|^p omega(x_i) h^n, with the
/// exterior weight bracket turned into a bracket on the result.
struct WeightField;
Bracket seminorm_zero_extended_p(const GridFunction& u, const EnergyForm& form, const WeightField& exterior);

}  // namespace hardylab

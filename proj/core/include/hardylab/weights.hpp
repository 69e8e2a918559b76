#pragma once

#include <vector>

#include "hardylab/energy.hpp"
#include "hardylab/grid_function.hpp"
#include "hardylab/params.hpp"

namespace hardylab {

enum class WeightKind { Hardy, Exterior };

/// Per-cell weight. Hardy: dist(x, dG)^{-sp}, exact (lower == upper == values).
/// Exterior: omega(x) = integral over R^n \ G of |x-y|^{-n-sp}, certified per-cell bracket
/// [lower, upper] with values the midpoint.
struct WeightField {
  WeightKind kind = WeightKind::Hardy;
  std::vector<double> values;
  std::vector<double> lower;
  std::vector<double> upper;
  /// Declared bound on (upper - lower) / lower for every cell.
  double tolerance = 0.0;
};

struct ExteriorOptions {
  /// Cell-level relative bracket width that triggers subdivision of an exterior cell.
  double cell_tolerance = 1e-3;
  int max_depth = 8;
  int workers = 1;
};

inline constexpr double kExteriorDeclaredTolerance = 5e-3;

/// Surface measure of the unit sphere in R^n (2 for n = 1, 2 pi for n = 2).
double unit_sphere_measure(int n);

WeightField hardy_weight(const GridDomain& domain, const EnergyParams& params);
WeightField exterior_weight(const GridDomain& domain, const EnergyParams& params, const ExteriorOptions& opts = {});
WeightField weight_field(const GridDomain& domain, const EnergyParams& params, WeightKind kind);

/// sum_i |u_i|^p w_i h^n using the weight's point values.
double weighted_mass(const GridFunction& u, const WeightField& w, double p);
Bracket weighted_mass_bracket(const GridFunction& u, const WeightField& w, double p);

/// Integral of |y|^{-alpha} over R^2 minus the axis-aligned rectangle [x0,x1] x [y0,y1],
/// as seen from the origin (which must lie strictly inside the rectangle).
double rectangle_exterior_integral(double x0, double x1, double y0, double y1, double sp);

}  // namespace hardylab

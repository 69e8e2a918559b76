#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "hardylab/convolution.hpp"
#include "hardylab/energy.hpp"
#include "hardylab/grid_function.hpp"
#include "hardylab/whitney.hpp"

namespace hardylab {

/// A compact subset of G given as a union of occupied cells.
struct CompactCellSet {
  DomainPtr domain;
  std::vector<std::int32_t> cells;  // sorted, unique
  /// Distance from the union of the closed cells to dG (lower estimate from cell centres).
  double margin = 0.0;

  CompactCellSet() = default;
  /// Validates: nonempty, clear of the boundary layer and, when `whitney` is given, of
  /// boundary-truncated cubes.
  CompactCellSet(DomainPtr domain, std::vector<std::int32_t> cells, const WhitneyDecomposition* whitney = nullptr);

  std::size_t size() const { return cells.size(); }
  std::uint64_t key() const;
  GridFunction indicator() const;
};

/// A cell set that cannot serve as K, naming the offending cell (-1 when the set is empty).
class InvalidCompactSet : public std::invalid_argument {
 public:
  InvalidCompactSet(const std::string& what, std::int32_t cell) : std::invalid_argument(what), cell_(cell) {}
  std::int32_t cell() const { return cell_; }

 private:
  std::int32_t cell_;
};

enum class SolveStatus { Converged, MaxIter, Infeasible };
std::string to_string(SolveStatus status);

struct CapacityOptions {
  /// Relative residual target of the p = 2 solve.
  double residual_tolerance = 1e-9;
  int max_cg_iterations = 5000;
  /// General p: stop when the energy decreased by less than this fraction over `window` steps.
  double stagnation = 1e-10;
  int window = 20;
  int max_descent_iterations = 20000;
  /// General p: rerun from the p = 2 minimizer and fold the disagreement into the gap.
  bool restart = true;
};

struct CapacityResult {
  double value = 0.0;  // seminorm_p of the witness
  GridFunction witness;
  /// Bound on value - cap. For p = 2 certified from the residual; for other p an estimate.
  double gap = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
};

/// The p = 2 energy as a quadratic form on the cells that are not held fixed:
/// seminorm_2(u) = 2 scale u^T L u with L = D - W (graph Laplacian of the dimensionless pair
/// weights). Offers the matrix-free product and a Jacobi-preconditioned CG solve on the free cells.
class PinnedLaplacian {
 public:
  PinnedLaplacian(const EnergyForm& form, std::vector<std::uint8_t> fixed);
  /// Shares an existing convolution of the same form (not applied concurrently).
  PinnedLaplacian(const EnergyForm& form, std::vector<std::uint8_t> fixed,
                  std::shared_ptr<LatticeConvolution> convolution);

  struct Solve {
    int iterations = 0;
    double residual_norm = 0.0;  // true residual ||b - L x|| on the free cells
    bool converged = false;
  };

  /// out = L_FF x on free cells, 0 on fixed cells (x is read on free cells only).
  void apply(std::span<const double> x, std::span<double> out) const;
  /// Solves L_FF x = b on the free cells to relative residual `tol`, starting from x.
  Solve solve(std::span<const double> b, std::span<double> x, double tol, int max_iterations) const;
  /// W applied to a full vector (all occupied cells).
  void weights(std::span<const double> in, std::span<double> out) const;

  const std::vector<double>& degree() const { return conv_->degree(); }
  const std::vector<std::uint8_t>& fixed() const { return fixed_; }
  double scale() const { return scale_; }

 private:
  std::shared_ptr<LatticeConvolution> conv_;
  std::vector<std::uint8_t> fixed_;
  double scale_ = 1.0;
  mutable std::vector<double> work_;
};

/// Capacity solver bound to one energy form. Results are cached by cell set.
class CapacitySolver {
 public:
  explicit CapacitySolver(EnergyForm form, CapacityOptions options = {});

  CapacityResult solve(const CompactCellSet& k);
  /// Uncached solve from a given admissible starting function (general p only uses it).
  CapacityResult solve_from(const CompactCellSet& k, const GridFunction& start) const;
  const EnergyForm& form() const { return form_; }
  const CapacityOptions& options() const { return options_; }
  std::size_t cache_size() const;

 private:
  CapacityResult solve_uncached(const CompactCellSet& k);
  CapacityResult solve_quadratic(const CompactCellSet& k) const;

  EnergyForm form_;
  CapacityOptions options_;
  std::shared_ptr<LatticeConvolution> conv_;
  std::unique_ptr<CapacitySolver> quadratic_companion_;  // p = 2 solver for restarts
  mutable std::mutex mutex_;
  std::map<std::vector<std::int32_t>, CapacityResult> cache_;
};

CapacityResult solve_capacity(const CompactCellSet& k, const EnergyForm& form, const CapacityOptions& options = {});

/// Energies of explicit admissible functions for K (>= 1 on K, 0 on the boundary layer).
/// Throws InvalidCompactSet naming the first violating cell.
std::vector<double> family_energies(const CompactCellSet& k, std::span<const GridFunction> family,
                                    const EnergyForm& form);

/// min over the family of seminorm_p.
double capacity_upper_bound(const CompactCellSet& k, std::span<const GridFunction> family, const EnergyForm& form);

/// Slit-snowflake test function u_m = v - w_m on a KochMinusSlit domain: v = 1 on R with a
/// linear ramp of width dist(R, dG')/2, w_m = 1 within 1/(4m) of the slit and 0 beyond 1/(2m).
GridFunction slit_test_family(const DomainPtr& domain, int m);

/// Cell size required to resolve the collar of slit_test_family for m.
double slit_family_max_h(const SlitSnowflakeSpec& spec, int m);

}  // namespace hardylab

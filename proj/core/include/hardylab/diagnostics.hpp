#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hardylab/capacity.hpp"
#include "hardylab/energy.hpp"
#include "hardylab/weights.hpp"
#include "hardylab/whitney.hpp"

namespace hardylab {

struct LabeledSet {
  std::string label;
  CompactCellSet set;
};

struct LabeledFunction {
  std::string label;
  GridFunction u;
};

// ---------------------------------------------------------------------------------------------
// Families

/// Cells of the non-truncated Whitney cubes with generation <= max_generation.
std::vector<std::int32_t> whitney_union(const WhitneyDecomposition& w, int max_generation);
std::vector<DyadicCube> whitney_union_cubes(const WhitneyDecomposition& w, int max_generation);

/// Compactum K_m of a slit snowflake: the non-truncated Whitney cubes lying inside the reference
/// square R whose diameter is at least the collar radius for m.
std::vector<DyadicCube> slit_collar_cubes(const WhitneyDecomposition& w, const SlitSnowflakeSpec& spec, int m);
std::vector<std::int32_t> cells_of(const WhitneyDecomposition& w, std::span<const DyadicCube> cubes);

/// Cells at centre distance >= depth from dG (concentric sub-squares / sub-balls).
std::vector<std::int32_t> interior_region(const GridDomain& domain, double depth);

/// Sum of random cones a_i max(0, 1 - |x - c_i| / r_i) with c_i in the domain and
/// r_i < dist(c_i, dG), set to 0 on the boundary layer. Centres and radii do not depend on h, so
/// refinements sample the same continuum function.
GridFunction random_bumps(const DomainPtr& domain, std::uint64_t seed, int bumps = 4);

/// Independent values uniform in [lo, hi] then clamped to [0, 1], zero on the boundary layer.
GridFunction random_clamped(const DomainPtr& domain, std::uint64_t seed, double lo = -0.5, double hi = 1.5);

// ---------------------------------------------------------------------------------------------
// Maz'ya testing condition

/// c 2^{3p+2} / (1 - 2^{-p}).
double mazya_implied_constant(double c, double p);

struct MazyaItem {
  std::string label;
  std::size_t cells = 0;
  double mass = 0.0;  // integral of the weight over K
  double capacity = 0.0;
  double gap = 0.0;
  double ratio = 0.0;  // +inf when capacity <= gap
  std::string status;
};

struct MazyaReport {
  WeightKind weight = WeightKind::Hardy;
  std::vector<MazyaItem> items;
  double c = 0.0;
  double implied_constant = 0.0;
};

MazyaReport mazya_test(std::span<const LabeledSet> family, const WeightField& w, CapacitySolver& solver);

/// Discrete replay of the level-set argument for one function u (zero on the boundary layer):
/// compacta are the annuli A_k, each bounded by the capacity solve and by the energy of u_{k-1}.
struct MazyaReplay {
  double mass = 0.0;    // weighted_mass(u)
  double energy = 0.0;  // seminorm_p(u)
  double c_emp = 0.0;
  double bound = 0.0;  // mazya_implied_constant(c_emp) * energy
  int levels = 0;
  bool holds() const { return mass <= bound * (1 + 1e-12); }
};

MazyaReplay mazya_replay(const GridFunction& u, const WeightField& w, CapacitySolver& solver);

// ---------------------------------------------------------------------------------------------
// Quasiadditivity

enum class QuasiMode { General, Weak };
std::string to_string(QuasiMode mode);

struct QuasiPiece {
  std::size_t cube = 0;
  std::size_t cells = 0;
  double capacity = 0.0;
  double gap = 0.0;
};

struct QuasiReport {
  std::string label;
  QuasiMode mode = QuasiMode::General;
  std::vector<QuasiPiece> pieces;
  double sum = 0.0;
  double sum_gap = 0.0;
  double capacity = 0.0;
  double gap = 0.0;
  double ratio = 0.0;
  bool defined = true;  // false when cap(K) <= gap
  std::size_t excluded_cells = 0;  // cells of K in boundary-truncated cubes
  /// The ratio may not fall below this: 1 - 4 gap / cap(K).
  double lower_limit() const { return 1.0 - 4.0 * gap / capacity; }
};

/// Weak mode requires K to be a union of whole non-truncated Whitney cubes.
QuasiReport quasiadditivity(const CompactCellSet& k, const WhitneyDecomposition& w, CapacitySolver& solver,
                            QuasiMode mode, std::string label = {});

// ---------------------------------------------------------------------------------------------
// Hardy constant bracket

struct HardyOptions {
  int max_power_iterations = 200;
  double power_tolerance = 1e-8;
  bool eigen = true;  // p = 2 only
};

struct HardyProbe {
  std::string label;
  double quotient = 0.0;  // weighted_mass / seminorm_p
  double c_emp = 0.0;
};

struct HardyReport {
  std::vector<HardyProbe> probes;
  double eigen_quotient = 0.0;
  int eigen_iterations = 0;
  bool eigen_used = false;
  double lower = 0.0;
  double c = 0.0;
  double upper = 0.0;
};

/// Lower bound: best quotient over the probes and, for p = 2, the maximiser found by power
/// iteration on (energy form)^{-1} (mass form). Upper bound: the Maz'ya constant implied by the
/// level-set compacta of every tested function. Throws std::logic_error if lower > upper.
HardyReport hardy_report(CapacitySolver& solver, const WeightField& hardy, std::span<const LabeledFunction> probes,
                         const HardyOptions& options = {});

// ---------------------------------------------------------------------------------------------
// Zero extension

struct ZeroExtProbe {
  std::string label;
  double energy = 0.0;
  Bracket extended;
  Bracket ratio;
};

struct ZeroExtReport {
  std::vector<ZeroExtProbe> probes;
  Bracket sup_ratio;
  std::size_t skipped = 0;
  MazyaReport mazya;  // Maz'ya test with the exterior weight
};

ZeroExtReport zero_extension_report(const EnergyForm& form, const WeightField& exterior,
                                    std::span<const LabeledFunction> probes, CapacitySolver* solver = nullptr,
                                    std::span<const LabeledSet> compacta = {});

// ---------------------------------------------------------------------------------------------
// Maximal operator

struct MaximalItem {
  std::string label;
  double energy = 0.0;
  double maximal_energy = 0.0;
  double ratio = 0.0;
  bool skipped = false;
};

struct MaximalReport {
  std::vector<MaximalItem> items;
  double max_ratio = 0.0;
  std::size_t skipped = 0;
};

MaximalReport maximal_boundedness_probe(const EnergyForm& form, std::span<const LabeledFunction> probes);

// ---------------------------------------------------------------------------------------------
// Capacity of Whitney cubes against their size

struct CapLowerItem {
  std::size_t cube = 0;
  int generation = 0;
  double side = 0.0;
  double capacity = 0.0;
  double gap = 0.0;
  double ratio = 0.0;  // cap(Q) / side^{n - sp}
};

struct CapLowerReport {
  std::vector<CapLowerItem> items;
  std::map<int, double> min_by_generation;
  double min_ratio = 0.0;
};

/// Evaluates up to `per_generation` evenly spaced non-truncated cubes of each listed generation
/// (0 means all of them).
CapLowerReport whitney_cap_lower_check(const WhitneyDecomposition& w, CapacitySolver& solver,
                                       std::span<const int> generations, std::size_t per_generation = 0);

}  // namespace hardylab

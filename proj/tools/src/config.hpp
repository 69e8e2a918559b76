#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardylab/capacity.hpp"
#include "hardylab/diagnostics.hpp"
#include "hardylab/serialize.hpp"

namespace hardylab::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Diagnostic { Mazya, Quasi, ZeroExt, Hardy, Maximal, CapLower };
std::string to_string(Diagnostic d);
Diagnostic diagnostic_from_string(const std::string& name);

enum class CompactKind { None, WhitneyUnion, InteriorRegion, SlitCollars };
enum class ProbeKind { None, RandomBumps, RandomClamped, DistanceRamps, SlitCutoffs, SlitFamily };

struct CompactFamily {
  CompactKind kind = CompactKind::None;
  /// Generations, depths or m values depending on the kind.
  std::vector<double> values;
};

struct ProbeFamily {
  ProbeKind kind = ProbeKind::None;
  int count = 0;
  int bumps = 4;
  std::vector<double> values;  // ramp widths or m values
};

enum class TrendKind { Increasing, Decreasing, BoundedSpread };

struct Trend {
  Diagnostic diagnostic = Diagnostic::Mazya;
  TrendKind expect = TrendKind::Increasing;
  double factor = 2.0;  // BoundedSpread: max / min must stay below this
};

struct ExperimentConfig {
  std::string name;
  DomainSpec domain;
  EnergyParams energy;
  std::vector<Rational> resolutions;
  std::vector<Diagnostic> diagnostics;
  CompactFamily compacta;
  ProbeFamily probes;
  WeightKind mazya_weight = WeightKind::Hardy;
  QuasiMode quasi_mode = QuasiMode::Weak;
  std::vector<int> caplower_generations;
  std::size_t caplower_per_generation = 0;
  CapacityOptions solver;
  std::vector<Trend> trends;
  std::uint64_t seed = 0;
  std::filesystem::path output;

  /// Canonical form: every field with its effective value, independent of input formatting.
  Json canonical() const;
  /// FNV-1a of the canonical form (output directory excluded).
  std::string hash() const;

  bool uses(Diagnostic d) const;
};

/// Parses and validates; throws ConfigError with a message naming the offending field.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Ladder strictly decreasing, every h admissible for the domain, families consistent with the
/// selected diagnostics.
void validate(const ExperimentConfig& c);

}  // namespace hardylab::cli

#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "hardylab/capacity.hpp"
#include "hardylab/diagnostics.hpp"
#include "hardylab/grid_function.hpp"
#include "hardylab/whitney.hpp"

namespace hardylab {

using Json = nlohmann::ordered_json;

/// Library version string.
const char* version();

/// 64-bit FNV-1a of a byte string, and its 16-digit lowercase hex form.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// Finite doubles as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double v);
double number_from(const Json& j);

Json spec_to_json(const DomainSpec& spec);
DomainSpec spec_from_json(const Json& j);

/// {"h", "origin", "mask_rle", "boundary", "flags"}; flags carry the descriptor, extent, loops
/// and fingerprint.
Json domain_to_json(const GridDomain& d);
GridDomain domain_from_json(const Json& j);

/// Array of {"k", "corner", "dist", "flag"}.
Json whitney_to_json(const WhitneyDecomposition& w);

/// {"domain_hash", "values"}; reading checks the hash against the given domain.
Json function_to_json(const GridFunction& u);
GridFunction function_from_json(const Json& j, const DomainPtr& domain);

/// {"value", "bracket", "p", "s"}.
Json energy_to_json(double value, const Bracket* bracket, const EnergyParams& params);

/// {"value", "gap", "status", "iterations", "witness_ref"}.
Json capacity_to_json(const CapacityResult& r, const std::string& witness_ref);

Json to_json(const MazyaReport& r);
Json to_json(const MazyaReplay& r);
Json to_json(const QuasiReport& r);
Json to_json(const HardyReport& r);
Json to_json(const ZeroExtReport& r);
Json to_json(const MaximalReport& r);
Json to_json(const CapLowerReport& r);

}  // namespace hardylab

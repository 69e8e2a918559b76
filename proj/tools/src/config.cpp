#include "config.hpp"

#include <algorithm>
#include <fstream>

namespace hardylab::cli {

namespace {

template <class E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<Diagnostic> kDiagnostics[] = {{Diagnostic::Mazya, "mazya"},     {Diagnostic::Quasi, "quasi"},
                                              {Diagnostic::ZeroExt, "zeroext"}, {Diagnostic::Hardy, "hardy"},
                                              {Diagnostic::Maximal, "maximal"}, {Diagnostic::CapLower, "caplower"}};
constexpr Names<CompactKind> kCompacts[] = {{CompactKind::None, "none"},
                                            {CompactKind::WhitneyUnion, "whitney_union"},
                                            {CompactKind::InteriorRegion, "interior_region"},
                                            {CompactKind::SlitCollars, "slit_collars"}};
constexpr Names<ProbeKind> kProbes[] = {{ProbeKind::None, "none"},
                                        {ProbeKind::RandomBumps, "random_bumps"},
                                        {ProbeKind::RandomClamped, "random_clamped"},
                                        {ProbeKind::DistanceRamps, "distance_ramps"},
                                        {ProbeKind::SlitCutoffs, "slit_cutoffs"},
                                        {ProbeKind::SlitFamily, "slit_family"}};
constexpr Names<TrendKind> kTrends[] = {{TrendKind::Increasing, "increasing"},
                                        {TrendKind::Decreasing, "decreasing"},
                                        {TrendKind::BoundedSpread, "bounded_spread"}};

template <class E, std::size_t N>
E lookup(const Names<E> (&table)[N], const std::string& name, const std::string& field) {
  for (const auto& e : table)
    if (name == e.name) return e.value;
  std::string known;
  for (const auto& e : table) known += std::string(known.empty() ? "" : ", ") + e.name;
  throw ConfigError(field + ": unknown value \"" + name + "\" (expected one of " + known + ")");
}

template <class E, std::size_t N>
std::string name_of(const Names<E> (&table)[N], E v) {
  for (const auto& e : table)
    if (e.value == v) return e.name;
  return "?";
}

std::vector<double> numbers(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  std::vector<double> out;
  for (const Json& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

bool is_slit(const ExperimentConfig& c) { return c.domain.kind == DomainKind::KochMinusSlit; }

}  // namespace

std::string to_string(Diagnostic d) { return name_of(kDiagnostics, d); }

Diagnostic diagnostic_from_string(const std::string& name) { return lookup(kDiagnostics, name, "diagnostic"); }

bool ExperimentConfig::uses(Diagnostic d) const {
  return std::find(diagnostics.begin(), diagnostics.end(), d) != diagnostics.end();
}

Json ExperimentConfig::canonical() const {
  Json ladder = Json::array();
  for (const Rational& h : resolutions) ladder.push_back(h.str());
  Json diags = Json::array();
  for (Diagnostic d : diagnostics) diags.push_back(to_string(d));
  Json trend_list = Json::array();
  for (const Trend& t : trends)
    trend_list.push_back({{"diagnostic", to_string(t.diagnostic)}, {"expect", name_of(kTrends, t.expect)}, {"factor", t.factor}});
  return {{"name", name},
          {"domain", spec_to_json(domain)},
          {"energy", {{"s", energy.s}, {"p", energy.p}}},
          {"resolutions", ladder},
          {"diagnostics", diags},
          {"compacta", {{"family", name_of(kCompacts, compacta.kind)}, {"values", compacta.values}}},
          {"probes",
           {{"family", name_of(kProbes, probes.kind)},
            {"count", probes.count},
            {"bumps", probes.bumps},
            {"values", probes.values}}},
          {"mazya", {{"weight", mazya_weight == WeightKind::Hardy ? "hardy" : "exterior"}}},
          {"quasi", {{"mode", hardylab::to_string(quasi_mode)}}},
          {"caplower", {{"generations", caplower_generations}, {"per_generation", caplower_per_generation}}},
          {"solver",
           {{"residual_tolerance", solver.residual_tolerance},
            {"max_cg_iterations", solver.max_cg_iterations},
            {"stagnation", solver.stagnation},
            {"window", solver.window},
            {"max_descent_iterations", solver.max_descent_iterations},
            {"restart", solver.restart}}},
          {"trends", trend_list},
          {"seed", seed}};
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a(canonical().dump())); }

ExperimentConfig parse_config(const Json& j) {
  ExperimentConfig c;
  try {
    c.name = j.value("name", std::string("experiment"));
    c.domain = spec_from_json(j.at("domain"));
    const Json& e = j.at("energy");
    c.energy.s = e.at("s").get<double>();
    c.energy.p = e.at("p").get<double>();
    c.energy.n = c.domain.dimension();
    for (const Json& h : j.at("resolutions")) c.resolutions.push_back(Rational::parse(h.get<std::string>()));
    for (const Json& d : j.at("diagnostics")) c.diagnostics.push_back(diagnostic_from_string(d.get<std::string>()));
    if (j.contains("compacta")) {
      const Json& k = j["compacta"];
      c.compacta.kind = lookup(kCompacts, k.at("family").get<std::string>(), "compacta.family");
      c.compacta.values = numbers(k, "values");
    }
    if (j.contains("probes")) {
      const Json& p = j["probes"];
      c.probes.kind = lookup(kProbes, p.at("family").get<std::string>(), "probes.family");
      c.probes.count = p.value("count", 0);
      c.probes.bumps = p.value("bumps", 4);
      c.probes.values = numbers(p, "values");
    }
    if (j.contains("mazya")) {
      const std::string w = j["mazya"].value("weight", std::string("hardy"));
      if (w != "hardy" && w != "exterior") throw ConfigError("mazya.weight: expected hardy or exterior");
      c.mazya_weight = w == "hardy" ? WeightKind::Hardy : WeightKind::Exterior;
    }
    if (j.contains("quasi")) {
      const std::string m = j["quasi"].value("mode", std::string("weak"));
      if (m != "weak" && m != "general") throw ConfigError("quasi.mode: expected weak or general");
      c.quasi_mode = m == "weak" ? QuasiMode::Weak : QuasiMode::General;
    }
    if (j.contains("caplower")) {
      c.caplower_generations = j["caplower"].value("generations", std::vector<int>{});
      c.caplower_per_generation = j["caplower"].value("per_generation", std::size_t{0});
    }
    if (j.contains("solver")) {
      const Json& s = j["solver"];
      CapacityOptions& o = c.solver;
      o.residual_tolerance = s.value("residual_tolerance", o.residual_tolerance);
      o.max_cg_iterations = s.value("max_cg_iterations", o.max_cg_iterations);
      o.stagnation = s.value("stagnation", o.stagnation);
      o.window = s.value("window", o.window);
      o.max_descent_iterations = s.value("max_descent_iterations", o.max_descent_iterations);
      o.restart = s.value("restart", o.restart);
    }
    for (const Json& t : j.value("trends", Json::array()))
      c.trends.push_back({diagnostic_from_string(t.at("diagnostic").get<std::string>()),
                          lookup(kTrends, t.at("expect").get<std::string>(), "trends.expect"), t.value("factor", 2.0)});
    c.seed = j.value("seed", std::uint64_t{0});
    c.output = j.value("output", std::string("out/") + c.name);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  try {
    c.energy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("energy: ") + e.what());
  }
  if (c.diagnostics.empty()) throw ConfigError("diagnostics: the list is empty");
  if (c.resolutions.empty()) throw ConfigError("resolutions: the ladder is empty");
  for (std::size_t i = 1; i < c.resolutions.size(); ++i)
    if (!(c.resolutions[i] < c.resolutions[i - 1]))
      throw ConfigError("resolutions: ladder must be strictly decreasing (" + c.resolutions[i - 1].str() + " then " +
                        c.resolutions[i].str() + ")");
  const Rational hmax = max_admissible_h(c.domain);
  for (const Rational& h : c.resolutions)
    if (!h.is_power_of_two() || hmax < h)
      throw ConfigError("resolutions: h = " + h.str() + " is not admissible for " + to_string(c.domain.kind) +
                        "; the largest admissible h is " + hmax.str());

  const bool capacity_needed = c.uses(Diagnostic::Mazya) || c.uses(Diagnostic::Quasi) ||
                               c.uses(Diagnostic::CapLower) || c.uses(Diagnostic::Hardy);
  if (capacity_needed && !(c.energy.p > 1.0)) throw ConfigError("energy.p: capacity diagnostics require p > 1");
  if ((c.uses(Diagnostic::Mazya) || c.uses(Diagnostic::Quasi)) && c.compacta.kind == CompactKind::None)
    throw ConfigError("compacta: mazya and quasi need a compact family");
  if (c.compacta.kind != CompactKind::None && c.compacta.values.empty())
    throw ConfigError("compacta.values: the family is empty");
  if (c.uses(Diagnostic::Quasi) && c.quasi_mode == QuasiMode::Weak && c.compacta.kind == CompactKind::InteriorRegion)
    throw ConfigError("quasi.mode: weak mode needs compacta built from whole Whitney cubes");
  if ((c.uses(Diagnostic::Hardy) || c.uses(Diagnostic::Maximal) || c.uses(Diagnostic::ZeroExt)) &&
      c.probes.kind == ProbeKind::None)
    throw ConfigError("probes: hardy, maximal and zeroext need a probe family");
  const bool counted = c.probes.kind == ProbeKind::RandomBumps || c.probes.kind == ProbeKind::RandomClamped;
  if (counted && c.probes.count <= 0) throw ConfigError("probes.count: must be positive");
  if (c.probes.kind != ProbeKind::None && !counted && c.probes.values.empty())
    throw ConfigError("probes.values: the family is empty");
  const bool slit_family = c.compacta.kind == CompactKind::SlitCollars || c.probes.kind == ProbeKind::SlitCutoffs ||
                           c.probes.kind == ProbeKind::SlitFamily;
  if (slit_family && !is_slit(c)) throw ConfigError("slit families need a koch_minus_slit domain");
  if (c.uses(Diagnostic::CapLower) && c.caplower_generations.empty())
    throw ConfigError("caplower.generations: the list is empty");
  if (c.uses(Diagnostic::Hardy) && c.mazya_weight == WeightKind::Exterior)
    throw ConfigError("mazya.weight: hardy diagnostics use the Hardy weight");
  for (const Trend& t : c.trends) {
    if (!c.uses(t.diagnostic)) throw ConfigError("trends: " + to_string(t.diagnostic) + " is not a selected diagnostic");
    if (t.diagnostic == Diagnostic::Hardy) throw ConfigError("trends: hardy reports brackets only");
    if (t.expect == TrendKind::BoundedSpread && !(t.factor > 1.0)) throw ConfigError("trends.factor: must exceed 1");
  }
}

}  // namespace hardylab::cli

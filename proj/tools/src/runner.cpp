#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "hardylab/maximal.hpp"
#include "hardylab/parallel.hpp"
#include "hardylab/test_functions.hpp"

namespace hardylab::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string h_tag(const Rational& h) { return "h" + std::to_string(h.num()) + "-" + std::to_string(h.den()); }

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// ---------------------------------------------------------------------------------------------
// One rung of the resolution ladder with its families

struct Level {
  Rational h;
  DomainPtr domain;
  WhitneyDecomposition whitney;
  EnergyForm form;
  std::vector<LabeledSet> compacta;
  std::vector<LabeledFunction> probes;
  Json skipped = Json::array();
};

void add_compact(Level& l, const std::string& label, std::vector<std::int32_t> cells, bool whole_cubes) {
  if (cells.empty()) {
    l.skipped.push_back({{"item", label}, {"reason", "empty at this resolution"}});
    return;
  }
  try {
    l.compacta.push_back({label, CompactCellSet(l.domain, std::move(cells), whole_cubes ? &l.whitney : nullptr)});
  } catch (const InvalidCompactSet& e) {
    l.skipped.push_back({{"item", label}, {"reason", e.what()}});
  }
}

Level build_level(const ExperimentConfig& c, const Rational& h, int workers) {
  Level l;
  l.h = h;
  try {
    l.domain = share(build_domain(c.domain, h));
  } catch (const InadmissibleResolution& e) {
    throw ConfigError(e.what());
  }
  l.whitney = whitney_decompose(*l.domain);
  l.form = EnergyForm(l.domain, c.energy, SummationMode::Compensated, workers);
  const SlitSnowflakeSpec& slit = c.domain.snowflake;

  for (double v : c.compacta.values) switch (c.compacta.kind) {
      case CompactKind::WhitneyUnion: {
        const int g = static_cast<int>(v);
        add_compact(l, "whitney<=" + std::to_string(g), whitney_union(l.whitney, g), true);
        break;
      }
      case CompactKind::InteriorRegion:
        add_compact(l, "depth=" + short_num(v), interior_region(*l.domain, v), false);
        break;
      case CompactKind::SlitCollars: {
        const int m = static_cast<int>(v);
        const auto cubes = slit_collar_cubes(l.whitney, slit, m);
        add_compact(l, "K_m=" + std::to_string(m), cells_of(l.whitney, cubes), true);
        break;
      }
      case CompactKind::None: break;
    }

  const ProbeFamily& p = c.probes;
  for (int i = 0; i < p.count; ++i) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
    if (p.kind == ProbeKind::RandomBumps)
      l.probes.push_back({"bumps[" + std::to_string(i) + "]", random_bumps(l.domain, seed, p.bumps)});
    if (p.kind == ProbeKind::RandomClamped)
      l.probes.push_back({"clamped[" + std::to_string(i) + "]", random_clamped(l.domain, seed)});
  }
  for (double v : p.values) {
    const int m = static_cast<int>(v);
    switch (p.kind) {
      case ProbeKind::DistanceRamps: l.probes.push_back({"ramp[" + short_num(v) + "]", distance_ramp(l.domain, v)}); break;
      case ProbeKind::SlitCutoffs:
        l.probes.push_back({"cutoff m=" + std::to_string(m), union_cutoff(slit_collar_cubes(l.whitney, slit, m), l.domain)});
        break;
      case ProbeKind::SlitFamily:
        if (h.value() > slit_family_max_h(slit, m))
          l.skipped.push_back({{"item", "slit m=" + std::to_string(m)},
                               {"reason", "collar not resolved; needs h <= " + short_num(slit_family_max_h(slit, m))}});
        else
          l.probes.push_back({"slit m=" + std::to_string(m), slit_test_family(l.domain, m)});
        break;
      default: break;
    }
  }
  return l;
}

Json header(const ExperimentConfig& c, const std::string& kind, const Level& l) {
  return {{"tool", "hardylab"},
          {"version", version()},
          {"config_hash", c.hash()},
          {"config_name", c.name},
          {"kind", kind},
          {"h", l.h.str()},
          {"domain_hash", hex64(l.domain->fingerprint())},
          {"energy", {{"s", c.energy.s}, {"p", c.energy.p}, {"n", c.energy.n}}}};
}

// ---------------------------------------------------------------------------------------------
// Diagnostics

struct Row {
  std::string item;
  std::string quantity;
  double value;
};

struct Outcome {
  Json report;
  Json invariants = Json::array();
  Json flags = Json::array();
  std::vector<Row> rows;
  std::vector<double> lo, hi;  // trend series in family order
  std::size_t violations = 0;

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    invariants.push_back({{"check", name}, {"ok", ok}, {"detail", detail}});
    if (!ok) ++violations;
  }
  void series(double v) {
    lo.push_back(v);
    hi.push_back(v);
  }
};

void flag_status(Outcome& o, const MazyaReport& r) {
  for (const MazyaItem& it : r.items)
    if (it.status != "converged") o.flags.push_back({{"item", it.label}, {"solver", it.status}});
}

void mazya(const ExperimentConfig& c, const Level& l, Outcome& o) {
  CapacitySolver solver(l.form, c.solver);
  const WeightField w = weight_field(*l.domain, c.energy, c.mazya_weight);
  const MazyaReport r = mazya_test(l.compacta, w, solver);
  flag_status(o, r);
  for (const MazyaItem& it : r.items) {
    o.rows.push_back({it.label, "ratio", it.ratio});
    o.rows.push_back({it.label, "mass", it.mass});
    o.rows.push_back({it.label, "capacity", it.capacity});
    o.series(it.ratio);
  }
  Json replays = Json::array();
  for (const LabeledFunction& f : l.probes) {
    const MazyaReplay rep = mazya_replay(f.u, w, solver);
    Json j = to_json(rep);
    j["probe"] = f.label;
    replays.push_back(std::move(j));
    o.check("level-set replay " + f.label, rep.holds(), "mass " + short_num(rep.mass) + ", bound " + short_num(rep.bound));
  }
  o.report = to_json(r);
  o.report["replays"] = std::move(replays);
}

void quasi(const ExperimentConfig& c, const Level& l, Outcome& o) {
  CapacitySolver solver(l.form, c.solver);
  Json items = Json::array();
  for (const LabeledSet& k : l.compacta) {
    const QuasiReport r = quasiadditivity(k.set, l.whitney, solver, c.quasi_mode, k.label);
    items.push_back(to_json(r));
    if (!r.defined) {
      o.flags.push_back({{"item", k.label}, {"reason", "capacity within solver gap"}});
      continue;
    }
    o.check("subadditivity " + k.label, r.ratio >= r.lower_limit(),
            "ratio " + short_num(r.ratio) + ", floor " + short_num(r.lower_limit()));
    o.rows.push_back({k.label, "ratio", r.ratio});
    o.rows.push_back({k.label, "sum", r.sum});
    o.rows.push_back({k.label, "capacity", r.capacity});
    o.series(r.ratio);
  }
  o.report = {{"mode", hardylab::to_string(c.quasi_mode)}, {"items", std::move(items)}};
}

void zeroext(const ExperimentConfig& c, const Level& l, Outcome& o) {
  CapacitySolver solver(l.form, c.solver);
  const WeightField ext = exterior_weight(*l.domain, c.energy);
  const ZeroExtReport r = zero_extension_report(l.form, ext, l.probes, &solver, l.compacta);
  flag_status(o, r.mazya);
  for (const ZeroExtProbe& p : r.probes) {
    o.check("extension adds energy " + p.label, p.ratio.lo >= 1.0 - 1e-12, "ratio lower end " + short_num(p.ratio.lo));
    o.rows.push_back({p.label, "ratio_lo", p.ratio.lo});
    o.rows.push_back({p.label, "ratio_hi", p.ratio.hi});
    o.lo.push_back(p.ratio.lo);
    o.hi.push_back(p.ratio.hi);
  }
  o.report = to_json(r);
}

void hardy(const ExperimentConfig& c, const Level& l, Outcome& o) {
  CapacitySolver solver(l.form, c.solver);
  const WeightField w = hardy_weight(*l.domain, c.energy);
  try {
    const HardyReport r = hardy_report(solver, w, l.probes);
    o.check("bracket nonempty", true);
    o.rows.push_back({"bracket", "lower", r.lower});
    o.rows.push_back({"bracket", "c", r.c});
    o.rows.push_back({"bracket", "upper", r.upper});
    o.report = to_json(r);
  } catch (const std::logic_error& e) {
    o.check("bracket nonempty", false, e.what());
    o.report = nullptr;
  }
}

void maximal(const ExperimentConfig&, const Level& l, Outcome& o) {
  const MaximalReport r = maximal_boundedness_probe(l.form, l.probes);
  for (const LabeledFunction& f : l.probes) {
    const GridFunction m = local_maximal(f.u);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < m.size(); ++i) bad += m[i] < std::abs(f.u[i]);
    o.check("M u >= |u| " + f.label, bad == 0, std::to_string(bad) + " cells below |u|");
  }
  for (const MaximalItem& it : r.items) {
    if (it.skipped) continue;
    o.rows.push_back({it.label, "ratio", it.ratio});
    o.series(it.ratio);
  }
  o.report = to_json(r);
}

void caplower(const ExperimentConfig& c, const Level& l, Outcome& o) {
  CapacitySolver solver(l.form, c.solver);
  const CapLowerReport r = whitney_cap_lower_check(l.whitney, solver, c.caplower_generations, c.caplower_per_generation);
  std::size_t nonpositive = 0;
  for (const CapLowerItem& it : r.items) nonpositive += !(it.capacity > 0);
  o.check("capacities positive", nonpositive == 0, std::to_string(nonpositive) + " nonpositive");
  for (const auto& [g, v] : r.min_by_generation) {
    o.rows.push_back({"generation " + std::to_string(g), "min_ratio", v});
    o.series(v);
  }
  o.report = to_json(r);
}

Outcome run_one(Diagnostic d, const ExperimentConfig& c, const Level& l) {
  Outcome o;
  try {
    switch (d) {
      case Diagnostic::Mazya: mazya(c, l, o); break;
      case Diagnostic::Quasi: quasi(c, l, o); break;
      case Diagnostic::ZeroExt: zeroext(c, l, o); break;
      case Diagnostic::Hardy: hardy(c, l, o); break;
      case Diagnostic::Maximal: maximal(c, l, o); break;
      case Diagnostic::CapLower: caplower(c, l, o); break;
    }
  } catch (const std::exception& e) {
    o.check("completed", false, e.what());
  }
  return o;
}

Json evaluate(const Trend& t, const Outcome& o, const Rational& h) {
  Json j = {{"diagnostic", to_string(t.diagnostic)}, {"h", h.str()}};
  const char* names[] = {"increasing", "decreasing", "bounded_spread"};
  j["expect"] = names[static_cast<int>(t.expect)];
  if (o.hi.size() < 2) {
    j["ok"] = false;
    j["detail"] = "fewer than two values";
    return j;
  }
  bool ok = true;
  if (t.expect == TrendKind::BoundedSpread) {
    const double spread = *std::max_element(o.hi.begin(), o.hi.end()) / *std::min_element(o.lo.begin(), o.lo.end());
    ok = spread < t.factor;
    j["detail"] = "spread " + short_num(spread) + " against factor " + short_num(t.factor);
  } else {
    for (std::size_t i = 1; i < o.hi.size(); ++i)
      ok = ok && (t.expect == TrendKind::Increasing ? o.lo[i] > o.hi[i - 1] : o.hi[i] < o.lo[i - 1]);
    std::string s;
    for (double v : o.hi) s += (s.empty() ? "" : ", ") + short_num(v);
    j["detail"] = "values " + s;
  }
  j["ok"] = ok;
  return j;
}

fs::path prepare(const ExperimentConfig& c, const RunOptions& o) {
  const fs::path out = o.out.empty() ? c.output : o.out;
  fs::create_directories(out);
  return out;
}

int finish(std::size_t violations, bool unverified) {
  if (violations) return kInvariantViolated;
  return unverified ? kTrendUnverified : kOk;
}

}  // namespace

int run(const ExperimentConfig& c, const RunOptions& opts) {
  const fs::path out = prepare(c, opts);
  std::ofstream csv(out / "results.csv", std::ios::binary);
  csv << "config_hash,diagnostic,h,item,quantity,value\n";
  Json reports = Json::array(), trends = Json::array(), flags = Json::array();
  std::size_t violations = 0, checks = 0;
  bool unverified = false;
  for (const Rational& h : c.resolutions) {
    const Level level = build_level(c, h, opts.workers);
    std::vector<Outcome> outcomes(c.diagnostics.size());
    for_each_chunk(c.diagnostics.size(), opts.workers,
                   [&](std::size_t i) { outcomes[i] = run_one(c.diagnostics[i], c, level); });
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const Diagnostic d = c.diagnostics[i];
      Outcome& o = outcomes[i];
      Json doc = header(c, to_string(d), level);
      doc["report"] = std::move(o.report);
      doc["invariants"] = o.invariants;
      doc["flags"] = o.flags;
      doc["skipped"] = level.skipped;
      const std::string file = to_string(d) + "_" + h_tag(h) + ".json";
      write_json(out / file, doc);
      reports.push_back(file);
      for (const Row& r : o.rows)
        csv << c.hash() << ',' << to_string(d) << ',' << h.str() << ",\"" << r.item << "\"," << r.quantity << ','
            << num(r.value) << '\n';
      violations += o.violations;
      checks += o.invariants.size();
      for (const Json& f : o.flags) {
        flags.push_back({{"diagnostic", to_string(d)}, {"h", h.str()}, {"flag", f}});
        unverified = true;
      }
      for (const Trend& t : c.trends)
        if (t.diagnostic == d) {
          Json r = evaluate(t, o, h);
          unverified = unverified || !r["ok"].get<bool>();
          trends.push_back(std::move(r));
        }
    }
  }
  const int code = finish(violations, unverified);
  const char* status[] = {"ok", "invariant violated", "config error", "trend unverified"};
  write_json(out / "summary.json", {{"tool", "hardylab"},
                                    {"version", version()},
                                    {"config_hash", c.hash()},
                                    {"config", c.canonical()},
                                    {"reports", reports},
                                    {"invariants", {{"checked", checks}, {"violated", violations}}},
                                    {"trends", trends},
                                    {"flags", flags},
                                    {"exit_code", code},
                                    {"status", status[code]}});
  return code;
}

int study(const ExperimentConfig& c, const RunOptions& opts) {
  if (c.resolutions.size() < 3) throw ConfigError("study: needs at least three resolutions");
  if (c.compacta.kind != CompactKind::None && !(c.energy.p > 1.0))
    throw ConfigError("study: capacities require p > 1");
  const fs::path out = prepare(c, opts);
  // quantity -> value per level
  std::map<std::string, std::vector<std::optional<double>>> table;
  std::vector<std::string> order;
  const auto record = [&](const std::string& q, std::size_t level, double v) {
    auto [it, fresh] = table.try_emplace(q, c.resolutions.size());
    if (fresh) order.push_back(q);
    it->second[level] = v;
  };
  Json skipped = Json::array();
  for (std::size_t i = 0; i < c.resolutions.size(); ++i) {
    const Level level = build_level(c, c.resolutions[i], opts.workers);
    for (const Json& s : level.skipped) skipped.push_back({{"h", c.resolutions[i].str()}, {"skipped", s}});
    CapacitySolver solver(level.form, c.solver);
    for (const LabeledSet& k : level.compacta) record("capacity " + k.label, i, solver.solve(k.set).value);
    for (const LabeledFunction& f : level.probes) record("seminorm " + f.label, i, seminorm_p(f.u, level.form));
  }
  std::ofstream csv(out / "study.csv", std::ios::binary);
  csv << "config_hash,quantity,h,value,relative_change,change_ratio\n";
  Json rows = Json::array();
  bool partial = false;
  for (const std::string& q : order) {
    const auto& vals = table[q];
    Json levels = Json::array();
    std::optional<double> prev, prev_change;
    std::size_t completed = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      Json lv = {{"h", c.resolutions[i].str()}, {"value", nullptr}, {"relative_change", nullptr}, {"change_ratio", nullptr}};
      std::optional<double> change;
      if (vals[i]) {
        ++completed;
        lv["value"] = number(*vals[i]);
        if (prev) {
          change = std::abs(*vals[i] - *prev) / std::abs(*prev);
          lv["relative_change"] = number(*change);
          if (prev_change && *prev_change > 0) lv["change_ratio"] = number(*change / *prev_change);
        }
      }
      csv << c.hash() << ",\"" << q << "\"," << c.resolutions[i].str() << ','
          << (vals[i] ? num(*vals[i]) : "") << ',' << (change ? num(*change) : "") << ','
          << (lv["change_ratio"].is_null() ? "" : num(*change / *prev_change)) << '\n';
      levels.push_back(std::move(lv));
      prev = vals[i];
      prev_change = change;
    }
    const bool part = completed < 2;
    partial = partial || part;
    rows.push_back({{"quantity", q}, {"levels", std::move(levels)}, {"partial", part}});
  }
  write_json(out / "study.json", {{"tool", "hardylab"},
                                  {"version", version()},
                                  {"config_hash", c.hash()},
                                  {"config", c.canonical()},
                                  {"quantities", std::move(rows)},
                                  {"skipped", std::move(skipped)},
                                  {"partial", partial}});
  return partial ? kTrendUnverified : kOk;
}

int emit_domain(const ExperimentConfig& c, const RunOptions& opts) {
  const fs::path out = prepare(c, opts);
  for (const Rational& h : c.resolutions) {
    Level l;
    l.h = h;
    try {
      l.domain = share(build_domain(c.domain, h));
    } catch (const InadmissibleResolution& e) {
      throw ConfigError(e.what());
    }
    Json doc = header(c, "domain", l);
    doc["domain"] = domain_to_json(*l.domain);
    write_json(out / ("domain_" + h_tag(h) + ".json"), doc);
  }
  return kOk;
}

int emit_whitney(const ExperimentConfig& c, const RunOptions& opts) {
  const fs::path out = prepare(c, opts);
  std::size_t violations = 0;
  for (const Rational& h : c.resolutions) {
    const Level l = build_level(c, h, opts.workers);
    const WhitneyValidation v = validate_whitney(*l.domain, l.whitney);
    violations += !v.ok();
    Json doc = header(c, "whitney", l);
    doc["validation"] = {{"cubes", v.cubes},
                         {"truncated", v.truncated},
                         {"distance_violations", v.distance_violations},
                         {"uncovered_cells", v.uncovered_cells},
                         {"multiply_covered_cells", v.multiply_covered_cells}};
    doc["overlap_constant"] = l.whitney.overlap_constant;
    doc["generations"] = {l.whitney.coarsest_generation, l.whitney.finest_generation};
    doc["cubes"] = whitney_to_json(l.whitney);
    write_json(out / ("whitney_" + h_tag(h) + ".json"), doc);
  }
  return finish(violations, false);
}

int emit_energy(const ExperimentConfig& c, const RunOptions& opts) {
  if (c.probes.kind == ProbeKind::None) throw ConfigError("energy: needs a probe family");
  const fs::path out = prepare(c, opts);
  for (const Rational& h : c.resolutions) {
    const Level l = build_level(c, h, opts.workers);
    Json items = Json::array();
    for (const LabeledFunction& f : l.probes)
      items.push_back({{"probe", f.label}, {"energy", energy_to_json(seminorm_p(f.u, l.form), nullptr, c.energy)}});
    Json doc = header(c, "energy", l);
    doc["probes"] = std::move(items);
    doc["skipped"] = l.skipped;
    write_json(out / ("energy_" + h_tag(h) + ".json"), doc);
  }
  return kOk;
}

int emit_capacity(const ExperimentConfig& c, const RunOptions& opts) {
  if (c.compacta.kind == CompactKind::None) throw ConfigError("capacity: needs a compact family");
  if (!(c.energy.p > 1.0)) throw ConfigError("capacity: requires p > 1");
  const fs::path out = prepare(c, opts);
  bool unverified = false;
  for (const Rational& h : c.resolutions) {
    const Level l = build_level(c, h, opts.workers);
    CapacitySolver solver(l.form, c.solver);
    const std::string witness_file = "capacity_" + h_tag(h) + "_witnesses.json";
    Json items = Json::array(), witnesses = Json::object();
    for (const LabeledSet& k : l.compacta) {
      const CapacityResult r = solver.solve(k.set);
      unverified = unverified || r.status != SolveStatus::Converged;
      items.push_back({{"K", k.label}, {"cells", k.set.size()}, {"capacity", capacity_to_json(r, witness_file + "#" + k.label)}});
      witnesses[k.label] = function_to_json(r.witness);
    }
    Json doc = header(c, "capacity", l);
    doc["compacta"] = std::move(items);
    doc["skipped"] = l.skipped;
    write_json(out / ("capacity_" + h_tag(h) + ".json"), doc);
    Json wdoc = header(c, "capacity-witnesses", l);
    wdoc["witnesses"] = std::move(witnesses);
    write_json(out / witness_file, wdoc);
  }
  return finish(0, unverified);
}

}  // namespace hardylab::cli

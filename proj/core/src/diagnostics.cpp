#include "hardylab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hardylab/levels.hpp"
#include "hardylab/maximal.hpp"

namespace hardylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_layer_zero(const GridFunction& u, const char* what) {
  const GridDomain& d = *u.domain;
  for (std::size_t c = 0; c < d.size(); ++c)
    if (d.in_boundary_layer(c) && u[c] != 0.0)
      throw std::invalid_argument(std::string(what) + ": function does not vanish on the boundary layer");
}

double cell_mass(std::span<const std::int32_t> cells, const WeightField& w, double volume) {
  double s = 0.0;
  for (std::int32_t c : cells) s += w.values[static_cast<std::size_t>(c)];
  return s * volume;
}

bool inside_described_set(const GridDomain& d, Point x) {
  if (d.dim() == 1) {
    double lo = kInf, hi = -kInf;
    for (const Segment& s : d.boundary()) {
      lo = std::min(lo, s.a.x);
      hi = std::max(hi, s.a.x);
    }
    return x.x > lo && x.x < hi;
  }
  const auto& loops = d.loops();
  if (loops.empty()) return false;
  if (!point_in_loop(x, loops.front())) return false;
  for (std::size_t i = 1; i < loops.size(); ++i)
    if (point_in_loop(x, loops[i])) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Families

std::vector<std::int32_t> whitney_union(const WhitneyDecomposition& w, int max_generation) {
  std::vector<std::int32_t> out;
  for (const WhitneyCube& q : w.cubes)
    if (!q.boundary_truncated && q.cube.k <= max_generation) out.insert(out.end(), q.cells.begin(), q.cells.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DyadicCube> whitney_union_cubes(const WhitneyDecomposition& w, int max_generation) {
  std::vector<DyadicCube> out;
  for (const WhitneyCube& q : w.cubes)
    if (!q.boundary_truncated && q.cube.k <= max_generation) out.push_back(q.cube);
  return out;
}

std::vector<DyadicCube> slit_collar_cubes(const WhitneyDecomposition& w, const SlitSnowflakeSpec& spec, int m) {
  const Box r = spec.r_box();
  std::vector<DyadicCube> out;
  for (const WhitneyCube& q : w.cubes) {
    if (q.boundary_truncated || q.cube.diam(2) < spec.collar_radius(m)) continue;
    const Box b = q.cube.box(2);
    if (b.lo.x >= r.lo.x && b.hi.x <= r.hi.x && b.lo.y >= r.lo.y && b.hi.y <= r.hi.y) out.push_back(q.cube);
  }
  return out;
}

std::vector<std::int32_t> cells_of(const WhitneyDecomposition& w, std::span<const DyadicCube> cubes) {
  std::vector<std::int32_t> out;
  for (const WhitneyCube& q : w.cubes)
    if (std::find(cubes.begin(), cubes.end(), q.cube) != cubes.end()) out.insert(out.end(), q.cells.begin(), q.cells.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int32_t> interior_region(const GridDomain& domain, double depth) {
  std::vector<std::int32_t> out;
  for (std::size_t c = 0; c < domain.size(); ++c)
    if (domain.dist()[c] >= depth) out.push_back(static_cast<std::int32_t>(c));
  return out;
}

GridFunction random_bumps(const DomainPtr& domain, std::uint64_t seed, int bumps) {
  const GridDomain& d = *domain;
  std::mt19937_64 rng(seed);
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const Segment& s : d.boundary())
    for (const Point& p : {s.a, s.b}) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  const double extent = std::max(x1 - x0, y1 - y0);
  struct Cone {
    Point c;
    double r;
    double a;
  };
  std::vector<Cone> cones;
  for (int attempt = 0; static_cast<int>(cones.size()) < bumps && attempt < 100000; ++attempt) {
    Point c{x0 + (x1 - x0) * uniform(rng), d.dim() == 1 ? 0.0 : y0 + (y1 - y0) * uniform(rng)};
    if (!inside_described_set(d, c)) continue;
    const double dc = min_distance(c, d.boundary());
    if (dc < 0.02 * extent) continue;
    cones.push_back({c, dc * (0.3 + 0.6 * uniform(rng)), 0.2 + 0.8 * uniform(rng)});
  }
  GridFunction u(domain);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (d.in_boundary_layer(i)) continue;
    const Point x = d.center(i);
    double v = 0.0;
    for (const Cone& k : cones) v += k.a * std::max(0.0, 1.0 - std::hypot(x.x - k.c.x, x.y - k.c.y) / k.r);
    u[i] = v;
  }
  return u;
}

GridFunction random_clamped(const DomainPtr& domain, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  GridFunction u(domain);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::clamp(lo + (hi - lo) * uniform(rng), 0.0, 1.0);
    u[i] = domain->in_boundary_layer(i) ? 0.0 : v;
  }
  return u;
}

// ---------------------------------------------------------------------------------------------
// Maz'ya

double mazya_implied_constant(double c, double p) { return c * std::pow(2.0, 3 * p + 2) / (1.0 - std::pow(2.0, -p)); }

MazyaReport mazya_test(std::span<const LabeledSet> family, const WeightField& w, CapacitySolver& solver) {
  MazyaReport rep;
  rep.weight = w.kind;
  const double p = solver.form().params.p;
  for (const LabeledSet& item : family) {
    MazyaItem it;
    it.label = item.label;
    it.cells = item.set.size();
    it.mass = cell_mass(item.set.cells, w, item.set.domain->cell_volume());
    const CapacityResult r = solver.solve(item.set);
    it.capacity = r.value;
    it.gap = r.gap;
    it.status = to_string(r.status);
    it.ratio = r.value > r.gap ? it.mass / r.value : kInf;
    rep.c = std::max(rep.c, it.ratio);
    rep.items.push_back(std::move(it));
  }
  rep.implied_constant = mazya_implied_constant(rep.c, p);
  return rep;
}

MazyaReplay mazya_replay(const GridFunction& u, const WeightField& w, CapacitySolver& solver) {
  require_layer_zero(u, "mazya_replay");
  const EnergyForm& form = solver.form();
  const double p = form.params.p;
  const double vol = u.domain->cell_volume();
  const LevelDecomposition levels = level_truncation(u);
  MazyaReplay out;
  for (const auto& [k, annulus] : levels.annuli) {
    const CompactCellSet set(u.domain, annulus);
    const GridFunction test = levels.truncation(k - 1);
    double x = seminorm_p(test, form);
    const CapacityResult r = p == 2.0 ? solver.solve(set) : solver.solve_from(set, test);
    x = std::min(x, r.value);
    out.c_emp = std::max(out.c_emp, cell_mass(annulus, w, vol) / x);
    ++out.levels;
  }
  out.mass = weighted_mass(u, w, p);
  out.energy = seminorm_p(u, form);
  out.bound = mazya_implied_constant(out.c_emp, p) * out.energy;
  return out;
}

// ---------------------------------------------------------------------------------------------
// Quasiadditivity

std::string to_string(QuasiMode mode) { return mode == QuasiMode::Weak ? "weak" : "general"; }

QuasiReport quasiadditivity(const CompactCellSet& k, const WhitneyDecomposition& w, CapacitySolver& solver,
                            QuasiMode mode, std::string label) {
  QuasiReport rep;
  rep.label = std::move(label);
  rep.mode = mode;
  std::map<std::size_t, std::vector<std::int32_t>> pieces;
  std::vector<std::int32_t> kept;
  for (std::int32_t c : k.cells) {
    const auto q = static_cast<std::size_t>(w.owner[static_cast<std::size_t>(c)]);
    if (w.cubes[q].boundary_truncated) {
      ++rep.excluded_cells;
      continue;
    }
    pieces[q].push_back(c);
    kept.push_back(c);
  }
  if (kept.empty()) throw std::invalid_argument("quasiadditivity: K lies entirely in boundary-truncated cubes");
  if (mode == QuasiMode::Weak) {
    if (rep.excluded_cells) throw std::invalid_argument("quasiadditivity (weak): K meets boundary-truncated cubes");
    for (const auto& [q, cells] : pieces)
      if (cells.size() != w.cubes[q].cells.size())
        throw std::invalid_argument("quasiadditivity (weak): K is not a union of Whitney cubes");
  }
  for (const auto& [q, cells] : pieces) {
    const CapacityResult r = solver.solve(CompactCellSet(k.domain, cells));
    rep.pieces.push_back({q, cells.size(), r.value, r.gap});
    rep.sum += r.value;
    rep.sum_gap += r.gap;
  }
  const CapacityResult whole = solver.solve(CompactCellSet(k.domain, kept));
  rep.capacity = whole.value;
  rep.gap = whole.gap;
  rep.defined = whole.value > whole.gap;
  rep.ratio = rep.defined ? rep.sum / rep.capacity : kInf;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Hardy

HardyReport hardy_report(CapacitySolver& solver, const WeightField& hardy, std::span<const LabeledFunction> probes,
                         const HardyOptions& options) {
  const EnergyForm& form = solver.form();
  const double p = form.params.p;
  HardyReport rep;
  const GridFunction* best_probe = nullptr;
  double best_q = -1.0;
  for (const LabeledFunction& f : probes) {
    const double e = seminorm_p(f.u, form);
    if (!(e > 0)) continue;
    HardyProbe hp{f.label, weighted_mass(f.u, hardy, p) / e, mazya_replay(f.u, hardy, solver).c_emp};
    if (hp.quotient > best_q) {
      best_q = hp.quotient;
      best_probe = &f.u;
    }
    rep.lower = std::max(rep.lower, hp.quotient);
    rep.c = std::max(rep.c, hp.c_emp);
    rep.probes.push_back(std::move(hp));
  }

  if (p == 2.0 && options.eigen) {
    const GridDomain& d = *form.domain;
    const std::size_t n = d.size();
    std::vector<std::uint8_t> fixed(n);
    for (std::size_t i = 0; i < n; ++i) fixed[i] = d.in_boundary_layer(i);
    const PinnedLaplacian lap(form, fixed);
    const double vol = d.cell_volume();
    std::vector<double> v(n, 0.0), rhs(n, 0.0), lv(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (!fixed[i]) v[i] = best_probe ? (*best_probe)[i] : 1.0;
    double q_prev = 0.0, q = 0.0;
    int it = 0;
    for (; it < options.max_power_iterations; ++it) {
      for (std::size_t i = 0; i < n; ++i) rhs[i] = fixed[i] ? 0.0 : vol * hardy.values[i] * v[i];
      std::vector<double> x = v;
      lap.solve(rhs, x, 1e-11, 20000);
      const double norm = *std::max_element(x.begin(), x.end());
      if (!(norm > 0)) break;
      for (std::size_t i = 0; i < n; ++i) v[i] = x[i] / norm;
      lap.apply(v, lv);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        num += vol * hardy.values[i] * v[i] * v[i];
        den += v[i] * lv[i];
      }
      q = num / (2.0 * lap.scale() * den);
      if (it > 0 && std::abs(q - q_prev) <= options.power_tolerance * q) {
        ++it;
        break;
      }
      q_prev = q;
    }
    GridFunction maximizer(form.domain);
    for (std::size_t i = 0; i < n; ++i) maximizer[i] = fixed[i] ? 0.0 : std::max(0.0, v[i]);
    const double e = seminorm_p(maximizer, form);
    if (e > 0) {
      rep.eigen_used = true;
      rep.eigen_iterations = it;
      rep.eigen_quotient = weighted_mass(maximizer, hardy, p) / e;
      rep.lower = std::max(rep.lower, rep.eigen_quotient);
      rep.c = std::max(rep.c, mazya_replay(maximizer, hardy, solver).c_emp);
    }
  }
  rep.upper = mazya_implied_constant(rep.c, p);
  if (rep.lower > rep.upper * (1 + 1e-9))
    throw std::logic_error("hardy_report: empty bracket (lower bound exceeds the Maz'ya bound)");
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Zero extension

ZeroExtReport zero_extension_report(const EnergyForm& form, const WeightField& exterior,
                                    std::span<const LabeledFunction> probes, CapacitySolver* solver,
                                    std::span<const LabeledSet> compacta) {
  ZeroExtReport rep;
  for (const LabeledFunction& f : probes) {
    const double e = seminorm_p(f.u, form);
    if (!(e > 0)) {
      ++rep.skipped;
      continue;
    }
    const Bracket ext = seminorm_zero_extended_p(f.u, form, exterior);
    const Bracket ratio{ext.lo / e, ext.hi / e};
    rep.sup_ratio.lo = std::max(rep.sup_ratio.lo, ratio.lo);
    rep.sup_ratio.hi = std::max(rep.sup_ratio.hi, ratio.hi);
    rep.probes.push_back({f.label, e, ext, ratio});
  }
  if (solver && !compacta.empty()) rep.mazya = mazya_test(compacta, exterior, *solver);
  rep.mazya.weight = WeightKind::Exterior;
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Maximal operator

MaximalReport maximal_boundedness_probe(const EnergyForm& form, std::span<const LabeledFunction> probes) {
  form.params.require_p_above_one("maximal_boundedness_probe");
  MaximalReport rep;
  for (const LabeledFunction& f : probes) {
    MaximalItem it;
    it.label = f.label;
    it.energy = seminorm_p(f.u, form);
    if (!(it.energy > 0)) {
      it.skipped = true;
      ++rep.skipped;
      rep.items.push_back(std::move(it));
      continue;
    }
    it.maximal_energy = seminorm_p(local_maximal(f.u), form);
    it.ratio = it.maximal_energy / it.energy;
    rep.max_ratio = std::max(rep.max_ratio, it.ratio);
    rep.items.push_back(std::move(it));
  }
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Whitney capacity lower bound

CapLowerReport whitney_cap_lower_check(const WhitneyDecomposition& w, CapacitySolver& solver,
                                       std::span<const int> generations, std::size_t per_generation) {
  const EnergyForm& form = solver.form();
  form.params.require_subcritical("whitney_cap_lower_check");
  CapLowerReport rep;
  rep.min_ratio = kInf;
  for (int g : generations) {
    std::vector<std::size_t> idx = w.generation(g);
    if (per_generation && idx.size() > per_generation) {
      std::vector<std::size_t> pick;
      for (std::size_t i = 0; i < per_generation; ++i) pick.push_back(idx[i * idx.size() / per_generation]);
      idx = std::move(pick);
    }
    for (std::size_t q : idx) {
      const WhitneyCube& cube = w.cubes[q];
      const CapacityResult r = solver.solve(CompactCellSet(form.domain, cube.cells));
      CapLowerItem it{q, g, cube.cube.side(), r.value, r.gap, 0.0};
      it.ratio = r.value / std::pow(it.side, form.params.homogeneity());
      auto [pos, inserted] = rep.min_by_generation.emplace(g, it.ratio);
      if (!inserted) pos->second = std::min(pos->second, it.ratio);
      rep.min_ratio = std::min(rep.min_ratio, it.ratio);
      rep.items.push_back(it);
    }
  }
  if (rep.items.empty()) rep.min_ratio = 0.0;
  return rep;
}

}  // namespace hardylab

#include "hardylab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#ifndef HARDYLAB_VERSION
#define HARDYLAB_VERSION "unknown"
#endif

namespace hardylab {

const char* version() { return HARDYLAB_VERSION; }

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  throw std::invalid_argument("not a number: " + s);
}

namespace {

Json point(Point p) { return Json::array({p.x, p.y}); }

Json bracket(const Bracket& b) { return Json::array({number(b.lo), number(b.hi)}); }

}  // namespace

Json spec_to_json(const DomainSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  j["scale"] = spec.scale;
  if (spec.kind == DomainKind::Disk) j["disk_vertices"] = spec.disk_vertices;
  if (spec.kind == DomainKind::Koch || spec.kind == DomainKind::KochMinusSlit) {
    const SlitSnowflakeSpec& k = spec.snowflake;
    j["level"] = k.level;
    j["side"] = k.side;
    if (spec.kind == DomainKind::KochMinusSlit) {
      j["r_center"] = point(k.r_center);
      j["r_side"] = k.r_side;
      j["unit"] = k.unit;
    }
  }
  return j;
}

DomainSpec spec_from_json(const Json& j) {
  DomainSpec spec;
  spec.kind = domain_kind_from_string(j.at("kind").get<std::string>());
  spec.scale = j.value("scale", 1.0);
  spec.disk_vertices = j.value("disk_vertices", 1024);
  SlitSnowflakeSpec& k = spec.snowflake;
  k.level = j.value("level", k.level);
  k.side = j.value("side", k.side);
  if (j.contains("r_center")) k.r_center = {j["r_center"].at(0).get<double>(), j["r_center"].at(1).get<double>()};
  k.r_side = j.value("r_side", k.r_side);
  k.unit = j.value("unit", k.unit);
  return spec;
}

Json domain_to_json(const GridDomain& d) {
  Json rle = Json::array();
  for (int row = 0; row < d.ny(); ++row) {
    Json runs = Json::array();
    std::uint8_t current = 0;
    int run = 0;
    for (int i = 0; i < d.nx(); ++i) {
      const std::uint8_t v = d.mask()[static_cast<std::size_t>(row) * d.nx() + i] ? 1 : 0;
      if (v != current) {
        runs.push_back(run);
        current = v;
        run = 0;
      }
      ++run;
    }
    runs.push_back(run);
    rle.push_back(std::move(runs));
  }
  Json boundary = Json::array();
  for (const Segment& s : d.boundary()) boundary.push_back(Json::array({s.a.x, s.a.y, s.b.x, s.b.y}));
  Json loops = Json::array();
  for (const auto& loop : d.loops()) {
    Json l = Json::array();
    for (const Point& p : loop) l.push_back(point(p));
    loops.push_back(std::move(l));
  }
  Json j;
  j["h"] = d.h().str();
  j["origin"] = Json::array({d.i0(), d.j0()});
  j["mask_rle"] = std::move(rle);
  j["boundary"] = std::move(boundary);
  j["flags"] = {{"spec", spec_to_json(d.spec())},
                {"extent", Json::array({d.nx(), d.ny()})},
                {"occupied", d.size()},
                {"loops", std::move(loops)},
                {"fingerprint", hex64(d.fingerprint())}};
  return j;
}

GridDomain domain_from_json(const Json& j) {
  const Rational h = Rational::parse(j.at("h").get<std::string>());
  const Json& flags = j.at("flags");
  const DomainSpec spec = spec_from_json(flags.at("spec"));
  const int nx = flags.at("extent").at(0).get<int>();
  const int ny = flags.at("extent").at(1).get<int>();
  const Json& rle = j.at("mask_rle");
  if (static_cast<int>(rle.size()) != ny) throw std::invalid_argument("domain file: mask row count mismatch");
  std::vector<std::uint8_t> mask;
  mask.reserve(static_cast<std::size_t>(nx) * ny);
  for (const Json& runs : rle) {
    std::uint8_t v = 0;
    std::size_t row = 0;
    for (const Json& r : runs) {
      const int n = r.get<int>();
      mask.insert(mask.end(), static_cast<std::size_t>(n), v);
      row += static_cast<std::size_t>(n);
      v ^= 1;
    }
    if (row != static_cast<std::size_t>(nx)) throw std::invalid_argument("domain file: mask row length mismatch");
  }
  std::vector<Segment> boundary;
  for (const Json& s : j.at("boundary"))
    boundary.push_back({{s.at(0).get<double>(), s.at(1).get<double>()}, {s.at(2).get<double>(), s.at(3).get<double>()}});
  std::vector<std::vector<Point>> loops;
  for (const Json& l : flags.value("loops", Json::array())) {
    std::vector<Point> loop;
    for (const Json& p : l) loop.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    loops.push_back(std::move(loop));
  }
  GridDomain d = rebuild_domain(spec, h, j.at("origin").at(0).get<int>(), j.at("origin").at(1).get<int>(),
                                std::move(mask), nx, ny, std::move(boundary), std::move(loops));
  if (flags.contains("fingerprint") && flags["fingerprint"].get<std::string>() != hex64(d.fingerprint()))
    throw std::invalid_argument("domain file: fingerprint mismatch");
  return d;
}

Json whitney_to_json(const WhitneyDecomposition& w) {
  Json out = Json::array();
  for (const WhitneyCube& q : w.cubes)
    out.push_back({{"k", q.cube.k},
                   {"corner", Json::array({q.cube.ci, q.cube.cj})},
                   {"dist", q.dist},
                   {"flag", q.boundary_truncated ? "boundary-truncated" : "none"}});
  return out;
}

Json function_to_json(const GridFunction& u) {
  Json values = Json::array();
  for (double v : u.values) values.push_back(v);
  return {{"domain_hash", hex64(u.domain->fingerprint())}, {"values", std::move(values)}};
}

GridFunction function_from_json(const Json& j, const DomainPtr& domain) {
  if (j.at("domain_hash").get<std::string>() != hex64(domain->fingerprint()))
    throw std::invalid_argument("grid function belongs to a different domain");
  return GridFunction(domain, j.at("values").get<std::vector<double>>());
}

Json energy_to_json(double value, const Bracket* b, const EnergyParams& params) {
  return {{"value", number(value)}, {"bracket", b ? bracket(*b) : Json(nullptr)}, {"p", params.p}, {"s", params.s}};
}

Json capacity_to_json(const CapacityResult& r, const std::string& witness_ref) {
  return {{"value", number(r.value)},
          {"gap", number(r.gap)},
          {"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"witness_ref", witness_ref}};
}

Json to_json(const MazyaReport& r) {
  Json items = Json::array();
  for (const MazyaItem& it : r.items)
    items.push_back({{"K", it.label},
                     {"cells", it.cells},
                     {"mass", number(it.mass)},
                     {"capacity", number(it.capacity)},
                     {"gap", number(it.gap)},
                     {"ratio", number(it.ratio)},
                     {"status", it.status}});
  return {{"weight", r.weight == WeightKind::Hardy ? "hardy" : "exterior"},
          {"items", std::move(items)},
          {"c", number(r.c)},
          {"implied_constant", number(r.implied_constant)}};
}

Json to_json(const MazyaReplay& r) {
  return {{"mass", number(r.mass)},     {"energy", number(r.energy)}, {"c_emp", number(r.c_emp)},
          {"bound", number(r.bound)},   {"levels", r.levels},         {"holds", r.holds()}};
}

Json to_json(const QuasiReport& r) {
  Json pieces = Json::array();
  for (const QuasiPiece& q : r.pieces)
    pieces.push_back({{"cube", q.cube}, {"cells", q.cells}, {"capacity", number(q.capacity)}, {"gap", number(q.gap)}});
  return {{"K", r.label},
          {"mode", to_string(r.mode)},
          {"pieces", std::move(pieces)},
          {"sum", number(r.sum)},
          {"sum_gap", number(r.sum_gap)},
          {"capacity", number(r.capacity)},
          {"gap", number(r.gap)},
          {"ratio", number(r.ratio)},
          {"defined", r.defined},
          {"excluded_cells", r.excluded_cells}};
}

Json to_json(const HardyReport& r) {
  Json probes = Json::array();
  for (const HardyProbe& p : r.probes)
    probes.push_back({{"probe", p.label}, {"quotient", number(p.quotient)}, {"c_emp", number(p.c_emp)}});
  return {{"probes", std::move(probes)},
          {"eigen_used", r.eigen_used},
          {"eigen_quotient", number(r.eigen_quotient)},
          {"eigen_iterations", r.eigen_iterations},
          {"bracket", Json::array({number(r.lower), number(r.upper)})},
          {"c", number(r.c)}};
}

Json to_json(const ZeroExtReport& r) {
  Json probes = Json::array();
  for (const ZeroExtProbe& p : r.probes)
    probes.push_back({{"probe", p.label},
                      {"energy", number(p.energy)},
                      {"extended", bracket(p.extended)},
                      {"ratio", bracket(p.ratio)}});
  Json j = {{"probes", std::move(probes)}, {"sup_ratio", bracket(r.sup_ratio)}, {"skipped", r.skipped}};
  if (!r.mazya.items.empty()) j["mazya"] = to_json(r.mazya);
  return j;
}

Json to_json(const MaximalReport& r) {
  Json items = Json::array();
  for (const MaximalItem& it : r.items)
    items.push_back({{"probe", it.label},
                     {"energy", number(it.energy)},
                     {"maximal_energy", number(it.maximal_energy)},
                     {"ratio", number(it.ratio)},
                     {"skipped", it.skipped}});
  return {{"items", std::move(items)}, {"max_ratio", number(r.max_ratio)}, {"skipped", r.skipped}};
}

Json to_json(const CapLowerReport& r) {
  Json items = Json::array();
  for (const CapLowerItem& it : r.items)
    items.push_back({{"cube", it.cube},
                     {"generation", it.generation},
                     {"side", it.side},
                     {"capacity", number(it.capacity)},
                     {"gap", number(it.gap)},
                     {"ratio", number(it.ratio)}});
  Json mins = Json::object();
  for (const auto& [g, v] : r.min_by_generation) mins[std::to_string(g)] = number(v);
  return {{"items", std::move(items)}, {"min_by_generation", std::move(mins)}, {"min_ratio", number(r.min_ratio)}};
}

}  // namespace hardylab

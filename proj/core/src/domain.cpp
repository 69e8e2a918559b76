#include "hardylab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hardylab {

namespace {

struct Features {
  std::vector<double> aligned;  // coordinates that must fall on grid lines
  double min_feature = 0.0;     // h may not exceed this
};

Features features_of(const DomainSpec& spec) {
  const double s = spec.scale;
  switch (spec.kind) {
    case DomainKind::Interval:
    case DomainKind::Square:
      return {{0.0, s}, s / 8};
    case DomainKind::Disk:
      return {{}, s / 8};
    case DomainKind::SquareMinusSlit:
      return {{0.0, s, s / 4, s / 2, 3 * s / 4}, s / 8};
    case DomainKind::PuncturedSquare:
      return {{0.0, s / 2, s}, s / 8};
    case DomainKind::Koch:
      return {{}, koch_edge_length(spec.snowflake.level, spec.snowflake.side)};
    case DomainKind::KochMinusSlit: {
      const SlitSnowflakeSpec& k = spec.snowflake;
      const Box r = k.r_box();
      return {{r.lo.x, r.lo.y, r.hi.x, r.hi.y, k.r_center.x, k.r_center.y, k.slit().a.x, k.slit().b.x},
              std::min(koch_edge_length(k.level, k.side), k.slit_half_length() / 2)};
    }
  }
  return {};
}

bool aligned_to(double x, double h) {
  const double q = x / h;
  return std::abs(q - std::round(q)) < 1e-9;
}

bool resolves(const Features& f, double h) {
  if (h > f.min_feature * (1 + 1e-12)) return false;
  return std::all_of(f.aligned.begin(), f.aligned.end(), [h](double x) { return aligned_to(x, h); });
}

void geometry_of(const DomainSpec& spec, std::vector<Segment>& segs, std::vector<std::vector<Point>>& loops) {
  const double s = spec.scale;
  switch (spec.kind) {
    case DomainKind::Interval:
      segs = {{{0.0, 0.0}, {0.0, 0.0}}, {{s, 0.0}, {s, 0.0}}};
      return;
    case DomainKind::Square:
    case DomainKind::SquareMinusSlit:
    case DomainKind::PuncturedSquare:
      loops = {{{0.0, 0.0}, {s, 0.0}, {s, s}, {0.0, s}}};
      segs = loop_segments(loops[0]);
      if (spec.kind == DomainKind::SquareMinusSlit) segs.push_back({{s / 4, s / 2}, {3 * s / 4, s / 2}});
      if (spec.kind == DomainKind::PuncturedSquare) segs.push_back({{s / 2, s / 2}, {s / 2, s / 2}});
      return;
    case DomainKind::Disk: {
      std::vector<Point> loop;
      const int m = std::max(16, spec.disk_vertices);
      for (int k = 0; k < m; ++k) {
        const double a = 2 * std::numbers::pi * k / m;
        loop.push_back({s / 2 + s / 2 * std::cos(a), s / 2 + s / 2 * std::sin(a)});
      }
      loops = {loop};
      segs = loop_segments(loops[0]);
      return;
    }
    case DomainKind::Koch:
    case DomainKind::KochMinusSlit: {
      loops = {koch_snowflake(spec.snowflake.level, spec.snowflake.side)};
      segs = loop_segments(loops[0]);
      if (spec.kind == DomainKind::KochMinusSlit) segs.push_back(spec.snowflake.slit());
      return;
    }
  }
}

void check_reference_square(const DomainSpec& spec, const std::vector<Segment>& segs,
                            const std::vector<std::vector<Point>>& loops) {
  if (spec.kind != DomainKind::KochMinusSlit) return;
  const Box r = spec.snowflake.r_box();
  const Point corners[4] = {r.lo, {r.hi.x, r.lo.y}, r.hi, {r.lo.x, r.hi.y}};
  for (const Point& c : corners)
    if (!point_in_loop(c, loops[0])) throw std::invalid_argument("koch_minus_slit: reference square leaves the snowflake");
  std::vector<Segment> outer(segs.begin(), segs.end() - 1);
  if (!(min_distance(r, outer) > 0.0))
    throw std::invalid_argument("koch_minus_slit: reference square touches the snowflake boundary");
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Interval: return "interval";
    case DomainKind::Square: return "square";
    case DomainKind::Disk: return "disk";
    case DomainKind::SquareMinusSlit: return "square_minus_slit";
    case DomainKind::PuncturedSquare: return "punctured_square";
    case DomainKind::Koch: return "koch";
    case DomainKind::KochMinusSlit: return "koch_minus_slit";
  }
  return "unknown";
}

DomainKind domain_kind_from_string(const std::string& name) {
  for (DomainKind k : {DomainKind::Interval, DomainKind::Square, DomainKind::Disk, DomainKind::SquareMinusSlit,
                       DomainKind::PuncturedSquare, DomainKind::Koch, DomainKind::KochMinusSlit})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown domain kind '" + name + "'");
}

DomainSpec DomainSpec::koch(int level, double side) {
  DomainSpec d;
  d.kind = DomainKind::Koch;
  d.snowflake.level = level;
  d.snowflake.side = side;
  return d;
}

DomainSpec DomainSpec::koch_minus_slit(const SlitSnowflakeSpec& s) {
  DomainSpec d;
  d.kind = DomainKind::KochMinusSlit;
  d.snowflake = s;
  return d;
}

Box GridDomain::cell_box(std::size_t c) const {
  const CellIndex& q = cells_[c];
  const double x = (i0_ + q.i) * hv_;
  if (dim_ == 1) return {{x, 0.0}, {x + hv_, 0.0}};
  const double y = (j0_ + q.j) * hv_;
  return {{x, y}, {x + hv_, y + hv_}};
}

double GridDomain::bbox_diameter() const {
  return dim_ == 1 ? nx_ * hv_ : std::hypot(nx_ * hv_, ny_ * hv_);
}

std::int64_t GridDomain::count_occupied(int ia, int ib, int ja, int jb) const {
  ia = std::clamp(ia, 0, nx_);
  ib = std::clamp(ib, 0, nx_);
  ja = std::clamp(ja, 0, ny_);
  jb = std::clamp(jb, 0, ny_);
  if (ia >= ib || ja >= jb) return 0;
  const auto at = [this](int i, int j) { return prefix_[static_cast<std::size_t>(j) * (nx_ + 1) + i]; };
  return at(ib, jb) - at(ia, jb) - at(ib, ja) + at(ia, ja);
}

std::uint64_t GridDomain::fingerprint() const {
  std::uint64_t hsh = 14695981039346656037ull;
  const auto mix = [&hsh](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < n; ++k) {
      hsh ^= b[k];
      hsh *= 1099511628211ull;
    }
  };
  const std::int64_t hd[2] = {h_.num(), h_.den()};
  mix(hd, sizeof hd);
  const int geo[5] = {dim_, i0_, j0_, nx_, ny_};
  mix(geo, sizeof geo);
  mix(mask_.data(), mask_.size());
  for (const Segment& s : boundary_) {
    const double v[4] = {s.a.x, s.a.y, s.b.x, s.b.y};
    mix(v, sizeof v);
  }
  return hsh;
}

void GridDomain::finalize() {
  index_.assign(mask_.size(), -1);
  cells_.clear();
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      if (mask_[static_cast<std::size_t>(j) * nx_ + i]) {
        index_[static_cast<std::size_t>(j) * nx_ + i] = static_cast<std::int32_t>(cells_.size());
        cells_.push_back({i, j});
      }
  if (cells_.empty()) throw std::invalid_argument("domain has no occupied cells at this resolution");
  prefix_.assign(static_cast<std::size_t>(nx_ + 1) * (ny_ + 1), 0);
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      prefix_[static_cast<std::size_t>(j + 1) * (nx_ + 1) + i + 1] =
          prefix_[static_cast<std::size_t>(j) * (nx_ + 1) + i + 1] +
          prefix_[static_cast<std::size_t>(j + 1) * (nx_ + 1) + i] -
          prefix_[static_cast<std::size_t>(j) * (nx_ + 1) + i] + mask_[static_cast<std::size_t>(j) * nx_ + i];
  dist_ = distance_field(*this);
}

Rational max_admissible_h(const DomainSpec& spec) {
  const Features f = features_of(spec);
  int e = static_cast<int>(std::floor(std::log2(f.min_feature) + 1e-12));
  for (int tries = 0; tries < 64; ++tries, --e) {
    const double h = std::ldexp(1.0, e);
    if (resolves(f, h)) return e >= 0 ? Rational(std::int64_t{1} << e, 1) : Rational(1, std::int64_t{1} << -e);
  }
  throw std::invalid_argument("domain features are not aligned to any dyadic grid");
}

GridDomain build_domain(const DomainSpec& spec, const Rational& h) {
  if (!(spec.scale > 0)) throw std::invalid_argument("domain scale must be positive");
  if (!h.is_power_of_two())
    throw InadmissibleResolution("cell size " + h.str() + " is not a power of two", max_admissible_h(spec));
  const double hv = h.value();
  if (!resolves(features_of(spec), hv))
    throw InadmissibleResolution("cell size " + h.str() + " does not resolve " + to_string(spec.kind),
                                 max_admissible_h(spec));

  std::vector<Segment> segs;
  std::vector<std::vector<Point>> loops;
  geometry_of(spec, segs, loops);
  check_reference_square(spec, segs, loops);

  const int dim = spec.dimension();
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const Segment& s : segs)
    for (const Point& p : {s.a, s.b}) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  const int ia = static_cast<int>(std::floor(xmin / hv)) - 1;
  const int ib = static_cast<int>(std::ceil(xmax / hv)) + 1;
  const int ja = dim == 1 ? 0 : static_cast<int>(std::floor(ymin / hv)) - 1;
  const int jb = dim == 1 ? 1 : static_cast<int>(std::ceil(ymax / hv)) + 1;

  const auto inside = [&](Point p) {
    if (dim == 1) return p.x > 0.0 && p.x < spec.scale;
    if (!point_in_loop(p, loops[0])) return false;
    return min_distance(p, segs) > 0.0;
  };

  int lo_i = ib, hi_i = ia - 1, lo_j = jb, hi_j = ja - 1;
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(ib - ia) * (jb - ja), 0);
  for (int j = ja; j < jb; ++j)
    for (int i = ia; i < ib; ++i) {
      const Point c{(i + 0.5) * hv, dim == 1 ? 0.0 : (j + 0.5) * hv};
      if (inside(c)) {
        raw[static_cast<std::size_t>(j - ja) * (ib - ia) + (i - ia)] = 1;
        lo_i = std::min(lo_i, i);
        hi_i = std::max(hi_i, i);
        lo_j = std::min(lo_j, j);
        hi_j = std::max(hi_j, j);
      }
    }
  if (hi_i < lo_i) throw InadmissibleResolution("no cell centre falls inside the domain", max_admissible_h(spec));

  GridDomain d;
  d.spec_ = spec;
  d.dim_ = dim;
  d.h_ = h;
  d.hv_ = hv;
  d.i0_ = lo_i;
  d.j0_ = lo_j;
  d.nx_ = hi_i - lo_i + 1;
  d.ny_ = hi_j - lo_j + 1;
  d.mask_.assign(static_cast<std::size_t>(d.nx_) * d.ny_, 0);
  for (int j = 0; j < d.ny_; ++j)
    for (int i = 0; i < d.nx_; ++i)
      d.mask_[static_cast<std::size_t>(j) * d.nx_ + i] =
          raw[static_cast<std::size_t>(j + lo_j - ja) * (ib - ia) + (i + lo_i - ia)];
  d.boundary_ = std::move(segs);
  d.loops_ = std::move(loops);
  d.finalize();
  return d;
}

GridDomain rebuild_domain(const DomainSpec& spec, const Rational& h, int i0, int j0, std::vector<std::uint8_t> mask,
                          int nx, int ny, std::vector<Segment> boundary, std::vector<std::vector<Point>> loops) {
  if (!h.is_power_of_two()) throw InadmissibleResolution("cell size is not a power of two", max_admissible_h(spec));
  if (mask.size() != static_cast<std::size_t>(nx) * ny) throw std::invalid_argument("mask size does not match extent");
  GridDomain d;
  d.spec_ = spec;
  d.dim_ = spec.dimension();
  d.h_ = h;
  d.hv_ = h.value();
  d.i0_ = i0;
  d.j0_ = j0;
  d.nx_ = nx;
  d.ny_ = ny;
  d.mask_ = std::move(mask);
  d.boundary_ = std::move(boundary);
  d.loops_ = std::move(loops);
  d.finalize();
  for (double v : d.dist_)
    if (!(v > 0.0)) throw std::invalid_argument("occupied cell centre lies on the boundary");
  return d;
}

std::vector<double> distance_field(const GridDomain& domain) {
  std::vector<double> out(domain.size());
  for (std::size_t c = 0; c < domain.size(); ++c) out[c] = min_distance(domain.center(c), domain.boundary());
  return out;
}

}  // namespace hardylab

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardylab/koch.hpp"
#include "hardylab/polygon.hpp"
#include "hardylab/rational.hpp"

namespace hardylab {

enum class DomainKind { Interval, Square, Disk, SquareMinusSlit, PuncturedSquare, Koch, KochMinusSlit };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

/// Descriptor of one of the supported bounded open sets. Axis-aligned shapes live in
/// [0, scale]^n; snowflakes are centred at the origin.
struct DomainSpec {
  DomainKind kind = DomainKind::Square;
  double scale = 1.0;
  SlitSnowflakeSpec snowflake{};  // used by Koch and KochMinusSlit
  int disk_vertices = 1024;

  int dimension() const { return kind == DomainKind::Interval ? 1 : 2; }

  static DomainSpec interval(double scale = 1.0) { return {DomainKind::Interval, scale}; }
  static DomainSpec square(double scale = 1.0) { return {DomainKind::Square, scale}; }
  static DomainSpec disk(double scale = 1.0) { return {DomainKind::Disk, scale}; }
  static DomainSpec square_minus_slit(double scale = 1.0) { return {DomainKind::SquareMinusSlit, scale}; }
  static DomainSpec punctured_square(double scale = 1.0) { return {DomainKind::PuncturedSquare, scale}; }
  static DomainSpec koch(int level = 4, double side = 6.0);
  static DomainSpec koch_minus_slit(const SlitSnowflakeSpec& s = {});
};

/// Thrown when the cell size cannot resolve the smallest feature of a domain.
class InadmissibleResolution : public std::invalid_argument {
 public:
  InadmissibleResolution(const std::string& what, Rational min_h)
      : std::invalid_argument(what + " (largest admissible h = " + min_h.str() + ")"), min_h_(min_h) {}
  const Rational& min_admissible_h() const { return min_h_; }

 private:
  Rational min_h_;
};

struct CellIndex {
  int i = 0;
  int j = 0;
};

/// A bounded open set sampled on a uniform dyadic grid. Cell (i, j) covers
/// [(i0 + i) h, (i0 + i + 1) h) x [(j0 + j) h, (j0 + j + 1) h); a cell is occupied when its centre
/// lies inside the open set. In one dimension ny == 1 and every y coordinate is 0.
class GridDomain {
 public:
  GridDomain() = default;

  int dim() const { return dim_; }
  const Rational& h() const { return h_; }
  double hv() const { return hv_; }
  /// Whitney generation whose cubes are single cells (h = 2^-cell_generation).
  int cell_generation() const { return -h_.log2(); }
  int i0() const { return i0_; }
  int j0() const { return j0_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return cells_.size(); }
  const DomainSpec& spec() const { return spec_; }

  bool occupied(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ && mask_[static_cast<std::size_t>(j) * nx_ + i];
  }
  /// Index of the occupied cell at local lattice position (i, j), or -1.
  std::int32_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
    return index_[static_cast<std::size_t>(j) * nx_ + i];
  }
  const CellIndex& cell(std::size_t c) const { return cells_[c]; }
  const std::vector<CellIndex>& cells() const { return cells_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  Point center(std::size_t c) const {
    const CellIndex& q = cells_[c];
    return {(i0_ + q.i + 0.5) * hv_, dim_ == 1 ? 0.0 : (j0_ + q.j + 0.5) * hv_};
  }
  Box cell_box(std::size_t c) const;

  const std::vector<Segment>& boundary() const { return boundary_; }
  const std::vector<std::vector<Point>>& loops() const { return loops_; }

  /// Exact distance from each occupied cell centre to the boundary polygon.
  const std::vector<double>& dist() const { return dist_; }

  /// Cells adjacent to the boundary (centre distance < h). Admissible functions vanish here;
  /// this is the grid stand-in for compact support in G.
  bool in_boundary_layer(std::size_t c) const { return dist_[c] < hv_; }

  double cell_volume() const { return dim_ == 1 ? hv_ : hv_ * hv_; }
  double occupied_volume() const { return cell_volume() * static_cast<double>(cells_.size()); }
  /// Euclidean diameter of the occupied bounding box.
  double bbox_diameter() const;

  /// Number of occupied cells in the local index rectangle [ia, ib) x [ja, jb) (clipped).
  std::int64_t count_occupied(int ia, int ib, int ja, int jb) const;

  /// Stable 64-bit fingerprint of the mask, h, origin and boundary.
  std::uint64_t fingerprint() const;

  friend GridDomain build_domain(const DomainSpec& spec, const Rational& h);
  friend GridDomain rebuild_domain(const DomainSpec&, const Rational&, int, int, std::vector<std::uint8_t>, int, int,
                                   std::vector<Segment>, std::vector<std::vector<Point>>);

 private:
  void finalize();

  DomainSpec spec_{};
  int dim_ = 2;
  Rational h_{1, 1};
  double hv_ = 1.0;
  int i0_ = 0;
  int j0_ = 0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> mask_;
  std::vector<std::int32_t> index_;
  std::vector<CellIndex> cells_;
  std::vector<std::int64_t> prefix_;
  std::vector<Segment> boundary_;
  std::vector<std::vector<Point>> loops_;
  std::vector<double> dist_;
};

/// Largest admissible cell size for a descriptor.
Rational max_admissible_h(const DomainSpec& spec);

/// Rasterises a descriptor. Throws InadmissibleResolution when h is not a power of two or
/// does not resolve the smallest feature.
GridDomain build_domain(const DomainSpec& spec, const Rational& h);

/// Reassembles a domain from stored parts (domain files); recomputes the distance field.
GridDomain rebuild_domain(const DomainSpec& spec, const Rational& h, int i0, int j0, std::vector<std::uint8_t> mask,
                          int nx, int ny, std::vector<Segment> boundary, std::vector<std::vector<Point>> loops);

/// Per-cell distance from the cell centre to the boundary segments.
std::vector<double> distance_field(const GridDomain& domain);

}  // namespace hardylab

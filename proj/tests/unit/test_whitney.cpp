#include <gtest/gtest.h>

#include <set>

#include "hardylab/whitney.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

void expect_partition(const GridDomain& d, const WhitneyDecomposition& w) {
  std::vector<int> hits(d.size(), 0);
  for (std::size_t q = 0; q < w.cubes.size(); ++q)
    for (std::int32_t c : w.cubes[q].cells) {
      ++hits[static_cast<std::size_t>(c)];
      EXPECT_EQ(w.owner[static_cast<std::size_t>(c)], static_cast<std::int32_t>(q));
    }
  for (int h : hits) EXPECT_EQ(h, 1);
}

}  // namespace

TEST(Whitney, SquareMatchesExhaustiveDyadicWalk) {
  for (int den : {16, 32, 64}) {
    const GridDomain d = build_domain(DomainSpec::square(), Rational(1, den));
    const WhitneyDecomposition w = whitney_decompose(d);
    const auto expected = oracle::square_whitney_owner(d, 1.0, d.cell_generation());
    for (std::size_t c = 0; c < d.size(); ++c) {
      const WhitneyCube& q = w.cubes[static_cast<std::size_t>(w.owner[c])];
      if (expected[c].k < 0) {
        EXPECT_TRUE(q.boundary_truncated);
        continue;
      }
      EXPECT_FALSE(q.boundary_truncated);
      EXPECT_EQ(q.cube.k, expected[c].k);
      EXPECT_EQ(q.cube.ci, expected[c].ci);
      EXPECT_EQ(q.cube.cj, expected[c].cj);
    }
  }
}

TEST(Whitney, ValidatorAndPartitionOnEveryShape) {
  const std::vector<std::pair<DomainSpec, Rational>> cases = {
      {DomainSpec::interval(), Rational(1, 256)},    {DomainSpec::square(), Rational(1, 64)},
      {DomainSpec::disk(), Rational(1, 64)},         {DomainSpec::square_minus_slit(), Rational(1, 32)},
      {DomainSpec::punctured_square(), Rational(1, 32)}, {DomainSpec::koch(4, 6.0), Rational(1, 16)}};
  for (const auto& [spec, h] : cases) {
    const GridDomain d = build_domain(spec, h);
    const WhitneyDecomposition w = whitney_decompose(d);
    const WhitneyValidation v = validate_whitney(d, w);
    EXPECT_TRUE(v.ok()) << to_string(spec.kind);
    EXPECT_EQ(v.cubes, w.cubes.size());
    EXPECT_LT(v.truncated, v.cubes);
    expect_partition(d, w);
    for (const WhitneyCube& q : w.cubes) {
      if (q.boundary_truncated) continue;
      const double diam = q.cube.diam(d.dim());
      EXPECT_GE(q.dist, diam);
      EXPECT_LE(q.dist, 4 * diam);
      EXPECT_EQ(q.cells.size(), static_cast<std::size_t>(std::pow(1 << (d.cell_generation() - q.cube.k), d.dim())));
    }
  }
}

TEST(Whitney, CubesAreDyadicAndDisjoint) {
  const GridDomain d = build_domain(DomainSpec::disk(), Rational(1, 32));
  const WhitneyDecomposition w = whitney_decompose(d);
  std::set<std::tuple<int, int, int>> seen;
  for (const WhitneyCube& q : w.cubes) EXPECT_TRUE(seen.emplace(q.cube.k, q.cube.ci, q.cube.cj).second);
}

TEST(Whitney, OverlapConstantStableUnderRefinementOnSquare) {
  const GridDomain a = build_domain(DomainSpec::square(), Rational(1, 32));
  const GridDomain b = build_domain(DomainSpec::square(), Rational(1, 64));
  const WhitneyDecomposition wa = whitney_decompose(a);
  const WhitneyDecomposition wb = whitney_decompose(b);
  EXPECT_GT(wa.overlap_constant, 0);
  EXPECT_EQ(wa.overlap_constant, wb.overlap_constant);
}

TEST(Whitney, DoubleStarOverlapMatchesDirectCount) {
  const GridDomain d = build_domain(DomainSpec::square(), Rational(1, 32));
  const WhitneyDecomposition w = whitney_decompose(d);
  const std::vector<int> counts = double_star_overlap(d, w);
  std::vector<int> direct(d.size(), 0);
  for (const WhitneyCube& q : w.cubes) {
    if (q.boundary_truncated) continue;
    const double half = q.cube.side() * kDoubleStarDilation / 2;
    const Point c = q.cube.center(2);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Point x = d.center(i);
      if (std::abs(x.x - c.x) <= half && std::abs(x.y - c.y) <= half) ++direct[i];
    }
  }
  EXPECT_EQ(counts, direct);
  EXPECT_LE(*std::max_element(counts.begin(), counts.end()), w.overlap_constant);
}

TEST(Whitney, DyadicScalingPreservesStructure) {
  const GridDomain a = build_domain(DomainSpec::square(1.0), Rational(1, 32));
  const GridDomain b = build_domain(DomainSpec::square(2.0), Rational(1, 16));
  const WhitneyDecomposition wa = whitney_decompose(a);
  const WhitneyDecomposition wb = whitney_decompose(b);
  ASSERT_EQ(wa.cubes.size(), wb.cubes.size());
  for (std::size_t q = 0; q < wa.cubes.size(); ++q) {
    EXPECT_EQ(wa.cubes[q].cube.k, wb.cubes[q].cube.k + 1);
    EXPECT_DOUBLE_EQ(2 * wa.cubes[q].dist, wb.cubes[q].dist);
    EXPECT_EQ(wa.cubes[q].cells, wb.cubes[q].cells);
  }
}

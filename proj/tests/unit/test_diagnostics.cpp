#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "hardylab/diagnostics.hpp"
#include "hardylab/test_functions.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

struct Square {
  DomainPtr d;
  WhitneyDecomposition w;
  explicit Square(int den, DomainSpec spec = DomainSpec::square())
      : d(share(build_domain(spec, Rational(1, den)))), w(whitney_decompose(*d)) {}
};

}  // namespace

TEST(Families, WhitneyUnionCollectsWholeCubes) {
  const Square s(32);
  for (int g = s.w.coarsest_generation; g <= s.w.finest_generation; ++g) {
    const auto cells = whitney_union(s.w, g);
    std::size_t want = 0;
    for (const DyadicCube& q : whitney_union_cubes(s.w, g)) {
      EXPECT_LE(q.k, g);
      want += cube_cells(*s.d, q).size();
    }
    EXPECT_EQ(cells.size(), want);
    EXPECT_TRUE(std::is_sorted(cells.begin(), cells.end()));
  }
}

TEST(Families, InteriorRegionRespectsDepth) {
  const Square s(32);
  const auto cells = interior_region(*s.d, 0.25);
  for (auto c : cells) EXPECT_GE(s.d->dist()[static_cast<std::size_t>(c)], 0.25);
  EXPECT_EQ(cells.size(), 256u);
}

TEST(Families, RandomProbesVanishOnTheLayerAndAreSeeded) {
  for (const DomainSpec& spec : {DomainSpec::disk(), DomainSpec::interval(), DomainSpec::koch(4, 6.0)}) {
    const auto d = share(build_domain(spec, spec.kind == DomainKind::Koch ? Rational(1, 16) : Rational(1, 32)));
    const GridFunction a = random_bumps(d, 5), b = random_bumps(d, 5), c = random_bumps(d, 6);
    const GridFunction r = random_clamped(d, 5);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, c.values);
    double peak = 0;
    for (std::size_t i = 0; i < d->size(); ++i) {
      if (d->in_boundary_layer(i)) {
        EXPECT_EQ(a[i], 0.0);
        EXPECT_EQ(r[i], 0.0);
      }
      EXPECT_GE(a[i], 0.0);
      EXPECT_GE(r[i], 0.0);
      EXPECT_LE(r[i], 1.0);
      peak = std::max(peak, a[i]);
    }
    EXPECT_GT(peak, 0.0);
  }
}

TEST(Families, BumpsSampleTheSameFunctionAcrossResolutions) {
  const auto coarse = share(build_domain(DomainSpec::disk(), Rational(1, 16)));
  const auto fine = share(build_domain(DomainSpec::disk(), Rational(1, 32)));
  const EnergyForm fc(coarse, EnergyParams(0.5, 2, 2)), ff(fine, EnergyParams(0.5, 2, 2));
  const double ec = seminorm_p(random_bumps(coarse, 3), fc), ef = seminorm_p(random_bumps(fine, 3), ff);
  EXPECT_LT(std::abs(ec - ef) / ef, 0.5);
}

TEST(Mazya, RatioIsMassOverCapacity) {
  const Square s(16);
  const EnergyParams par(0.4, 2.0, 2);
  CapacitySolver solver{EnergyForm(s.d, par)};
  const WeightField hw = hardy_weight(*s.d, par);
  const std::vector<LabeledSet> family = {{"inner", CompactCellSet(s.d, interior_region(*s.d, 0.3))},
                                          {"ring", CompactCellSet(s.d, interior_region(*s.d, 0.1))}};
  const MazyaReport rep = mazya_test(family, hw, solver);
  ASSERT_EQ(rep.items.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& it = rep.items[i];
    double mass = 0;
    for (auto c : family[i].set.cells) mass += hw.values[static_cast<std::size_t>(c)] * s.d->cell_volume();
    EXPECT_NEAR(it.mass, mass, 1e-12 * mass);
    EXPECT_DOUBLE_EQ(it.ratio, it.mass / it.capacity);
    EXPECT_EQ(it.status, "converged");
  }
  EXPECT_DOUBLE_EQ(rep.c, std::max(rep.items[0].ratio, rep.items[1].ratio));
  EXPECT_DOUBLE_EQ(rep.implied_constant, mazya_implied_constant(rep.c, 2.0));
  EXPECT_DOUBLE_EQ(mazya_implied_constant(1.0, 2.0), 256.0 / 0.75);
}

TEST(Mazya, ReplayBoundHoldsForProbes) {
  const Square s(16, DomainSpec::punctured_square());
  const EnergyParams par(0.4, 2.0, 2);
  CapacitySolver solver{EnergyForm(s.d, par)};
  const WeightField hw = hardy_weight(*s.d, par);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MazyaReplay r = mazya_replay(seed % 2 ? random_bumps(s.d, seed) : random_clamped(s.d, seed), hw, solver);
    EXPECT_TRUE(r.holds());
    EXPECT_GT(r.levels, 0);
  }
  GridFunction bad(s.d, 1.0);
  EXPECT_THROW(mazya_replay(bad, hw, solver), std::invalid_argument);
}

TEST(Quasi, RatioRespectsGapLimitAndSingleCubeIsOne) {
  const Square s(32);
  const EnergyParams par(0.4, 2.0, 2);
  CapacitySolver solver{EnergyForm(s.d, par)};
  const std::size_t q = s.w.generation(3).front();
  const QuasiReport one = quasiadditivity(CompactCellSet(s.d, s.w.cubes[q].cells), s.w, solver, QuasiMode::Weak);
  EXPECT_DOUBLE_EQ(one.ratio, 1.0);
  const QuasiReport many = quasiadditivity(CompactCellSet(s.d, whitney_union(s.w, 4), &s.w), s.w, solver,
                                           QuasiMode::Weak, "g4");
  EXPECT_GE(many.ratio, many.lower_limit());
  EXPECT_GE(many.ratio, 1.0 - 1e-9);
  EXPECT_EQ(many.label, "g4");
  std::vector<std::int32_t> partial(s.w.cubes[q].cells.begin(), s.w.cubes[q].cells.begin() + 3);
  EXPECT_THROW(quasiadditivity(CompactCellSet(s.d, partial), s.w, solver, QuasiMode::Weak), std::invalid_argument);
  const QuasiReport general = quasiadditivity(CompactCellSet(s.d, partial), s.w, solver, QuasiMode::General);
  EXPECT_EQ(general.pieces.size(), 1u);
}

TEST(Hardy, PowerIterationFindsTheLargestGeneralizedEigenvalue) {
  const Square s(8);
  const EnergyParams par(0.5, 2.0, 2);
  CapacitySolver solver{EnergyForm(s.d, par)};
  const WeightField hw = hardy_weight(*s.d, par);
  const GridFunction probe = random_bumps(s.d, 1);
  const LabeledFunction lf{"bump", probe};
  const HardyReport rep = hardy_report(solver, hw, std::span(&lf, 1));
  ASSERT_TRUE(rep.eigen_used);

  // mass(u) = u^T M u, energy(u) = u^T A u on the interior cells.
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < s.d->size(); ++c)
    if (!s.d->in_boundary_layer(c)) free.push_back(c);
  const auto m = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m), mm = Eigen::MatrixXd::Zero(m, m);
  const double hn = s.d->cell_volume();
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t i = free[static_cast<std::size_t>(r)];
    mm(r, r) = hn * hw.values[i];
    for (std::size_t j = 0; j < s.d->size(); ++j) {
      if (j == i) continue;
      const double w = 2 * hn * hn / std::pow(oracle::distance(s.d->center(i), s.d->center(j)), par.kernel_exponent());
      a(r, r) += w;
      const auto it = std::find(free.begin(), free.end(), j);
      if (it != free.end()) a(r, it - free.begin()) -= w;
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(mm, a);
  const double lambda = es.eigenvalues().maxCoeff();
  EXPECT_LT(oracle::rel_err(rep.eigen_quotient, lambda), 1e-6);
  EXPECT_LE(rep.lower, rep.upper);
  EXPECT_GE(rep.lower, rep.probes[0].quotient);
}

TEST(ZeroExtension, RatiosAtLeastOneAndConstantsSkipped) {
  const Square s(16);
  const EnergyParams par(0.4, 2.0, 2);
  const EnergyForm form(s.d, par);
  const WeightField ext = exterior_weight(*s.d, par);
  const std::vector<LabeledFunction> probes = {{"bump", random_bumps(s.d, 2)}, {"const", GridFunction(s.d, 1.0)}};
  const ZeroExtReport rep = zero_extension_report(form, ext, probes);
  EXPECT_EQ(rep.skipped, 1u);
  ASSERT_EQ(rep.probes.size(), 1u);
  EXPECT_GE(rep.probes[0].ratio.lo, 1.0);
  EXPECT_LE(rep.probes[0].ratio.lo, rep.probes[0].ratio.hi);
  EXPECT_EQ(rep.mazya.weight, WeightKind::Exterior);
}

TEST(MaximalProbe, SkipsConstantsAndRecordsRatios) {
  const Square s(16);
  const EnergyForm form(s.d, EnergyParams(0.4, 2.0, 2));
  const std::vector<LabeledFunction> probes = {{"const", GridFunction(s.d, 1.0)}, {"bump", random_bumps(s.d, 4)}};
  const MaximalReport rep = maximal_boundedness_probe(form, probes);
  EXPECT_EQ(rep.skipped, 1u);
  EXPECT_TRUE(rep.items[0].skipped);
  EXPECT_GT(rep.items[1].ratio, 0.0);
  EXPECT_DOUBLE_EQ(rep.max_ratio, rep.items[1].ratio);
  EXPECT_THROW(maximal_boundedness_probe(EnergyForm(s.d, EnergyParams(0.4, 1.0, 2)), probes), std::domain_error);
}

TEST(CapLower, DyadicScalingGivesEqualRatios) {
  const auto a = share(build_domain(DomainSpec::square(1.0), Rational(1, 32)));
  const auto b = share(build_domain(DomainSpec::square(2.0), Rational(1, 16)));
  const EnergyParams par(0.6, 2.0, 2);
  CapacitySolver sa{EnergyForm(a, par)}, sb{EnergyForm(b, par)};
  const WhitneyDecomposition wa = whitney_decompose(*a), wb = whitney_decompose(*b);
  const std::vector<int> ga = {3}, gb = {2};
  const CapLowerReport ra = whitney_cap_lower_check(wa, sa, ga, 2);
  const CapLowerReport rb = whitney_cap_lower_check(wb, sb, gb, 2);
  ASSERT_EQ(ra.items.size(), rb.items.size());
  for (std::size_t i = 0; i < ra.items.size(); ++i) EXPECT_LT(oracle::rel_err(ra.items[i].ratio, rb.items[i].ratio), 1e-8);
}

TEST(CapLower, DiskRatiosStayComparable) {
  const auto d = share(build_domain(DomainSpec::disk(), Rational(1, 64)));
  CapacitySolver solver{EnergyForm(d, EnergyParams(0.75, 2.0, 2))};
  const std::vector<int> gens = {3, 4, 5};
  const CapLowerReport rep = whitney_cap_lower_check(whitney_decompose(*d), solver, gens, 4);
  ASSERT_EQ(rep.min_by_generation.size(), 3u);
  double lo = INFINITY, hi = 0;
  for (const auto& [g, v] : rep.min_by_generation) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 4.0);
}

TEST(CapLower, SquareSubcriticalReportIsPopulated) {
  const auto d = share(build_domain(DomainSpec::square(), Rational(1, 64)));
  CapacitySolver solver{EnergyForm(d, EnergyParams(0.4, 2.0, 2))};
  const std::vector<int> gens = {3, 4, 5};
  const CapLowerReport rep = whitney_cap_lower_check(whitney_decompose(*d), solver, gens, 3);
  EXPECT_EQ(rep.min_by_generation.size(), 3u);
  EXPECT_EQ(rep.items.size(), 9u);
  for (const CapLowerItem& it : rep.items) {
    EXPECT_TRUE(std::isfinite(it.ratio));
    EXPECT_GT(it.ratio, 0.0);
  }
  EXPECT_THROW(whitney_cap_lower_check(whitney_decompose(*d),
                                       *std::make_unique<CapacitySolver>(EnergyForm(d, EnergyParams(0.9, 3.0, 2))), gens),
               std::domain_error);
}

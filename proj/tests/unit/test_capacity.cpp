#include <gtest/gtest.h>

#include <random>

#include "hardylab/capacity.hpp"
#include "hardylab/convolution.hpp"
#include "hardylab/test_functions.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

std::vector<std::int32_t> interior_cells(const GridDomain& d) {
  std::vector<std::int32_t> out;
  for (std::size_t c = 0; c < d.size(); ++c)
    if (!d.in_boundary_layer(c)) out.push_back(static_cast<std::int32_t>(c));
  return out;
}

std::vector<std::int32_t> random_subset(const std::vector<std::int32_t>& pool, std::mt19937_64& rng, std::size_t k) {
  std::vector<std::int32_t> v = pool;
  std::shuffle(v.begin(), v.end(), rng);
  v.resize(std::min(k, v.size()));
  return v;
}

}  // namespace

TEST(Convolution, MatchesDirectPairSumOnRectangularLattices) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(-1, 1);
  const std::vector<std::pair<DomainSpec, Rational>> cases = {{DomainSpec::interval(), Rational(1, 64)},
                                                              {DomainSpec::koch(3, 6.0), Rational(1, 8)},
                                                              {DomainSpec::square_minus_slit(), Rational(1, 16)}};
  for (const auto& [spec, h] : cases) {
    const GridDomain d = build_domain(spec, h);
    const EnergyParams par(0.4, 2.0, d.dim());
    const KernelTable k(d.nx(), d.ny(), par, d.hv());
    const LatticeConvolution conv(d, k);
    std::vector<double> in(d.size()), out(d.size());
    for (double& v : in) v = dist(rng);
    conv.apply(in, out);
    for (std::size_t i = 0; i < d.size(); i += 3) {
      double want = 0, deg = 0;
      for (std::size_t j = 0; j < d.size(); ++j) {
        if (i == j) continue;
        const double w = std::pow(oracle::distance(d.center(i), d.center(j)) / d.hv(), -par.kernel_exponent());
        want += w * in[j];
        deg += w;
      }
      EXPECT_NEAR(out[i], want, 1e-10 * deg) << to_string(spec.kind);
      EXPECT_NEAR(conv.degree()[i], deg, 1e-10 * deg);
    }
  }
}

TEST(CompactSet, ValidatesCells) {
  const auto d = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  EXPECT_THROW(CompactCellSet(d, {}), InvalidCompactSet);
  EXPECT_THROW(CompactCellSet(d, {9999}), InvalidCompactSet);
  try {
    CompactCellSet(d, {d->index(5, 5), d->index(0, 3)});
    FAIL();
  } catch (const InvalidCompactSet& e) {
    EXPECT_EQ(e.cell(), d->index(0, 3));
  }
  const CompactCellSet k(d, {d->index(5, 5), d->index(4, 4), d->index(5, 5)});
  EXPECT_EQ(k.size(), 2u);
  EXPECT_DOUBLE_EQ(k.margin, 4.5 / 16 - std::sqrt(2.0) / 32);
}

TEST(CompactSet, RejectsBoundaryTruncatedCubes) {
  const auto d = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  const WhitneyDecomposition w = whitney_decompose(*d);
  for (const WhitneyCube& q : w.cubes)
    if (q.boundary_truncated) {
      for (std::int32_t c : q.cells)
        if (!d->in_boundary_layer(static_cast<std::size_t>(c))) {
          EXPECT_THROW(CompactCellSet(d, {c}, &w), InvalidCompactSet);
          return;
        }
    }
}

TEST(Capacity, QuadraticMatchesDenseSolve) {
  std::mt19937_64 rng(17);
  for (const DomainSpec& spec : {DomainSpec::square(), DomainSpec::punctured_square()}) {
    const auto d = share(build_domain(spec, Rational(1, 8)));
    ASSERT_LE(d->size(), 64u);
    const auto pool = interior_cells(*d);
    for (double s : {0.3, 0.5, 0.8}) {
      const EnergyParams par(s, 2.0, 2);
      CapacitySolver solver{EnergyForm(d, par)};
      for (int t = 0; t < 4; ++t) {
        const CompactCellSet k(d, random_subset(pool, rng, 1 + t * 3));
        const CapacityResult r = solver.solve(k);
        const auto dense = oracle::dense_capacity(d, k.cells, par);
        EXPECT_EQ(r.status, SolveStatus::Converged);
        EXPECT_LT(oracle::rel_err(r.value, dense.value), 1e-8);
        EXPECT_LE(r.value - dense.value, r.gap + 1e-12 * dense.value);
        for (std::size_t c = 0; c < d->size(); ++c) EXPECT_NEAR(r.witness[c], dense.u[c], 1e-6);
      }
    }
  }
}

TEST(Capacity, OneDimensionalMatchesDenseSolve) {
  const auto d = share(build_domain(DomainSpec::interval(), Rational(1, 64)));
  const EnergyParams par(0.45, 2.0, 1);
  const CompactCellSet k(d, {20, 21, 22, 40});
  const CapacityResult r = solve_capacity(k, EnergyForm(d, par));
  EXPECT_LT(oracle::rel_err(r.value, oracle::dense_capacity(d, k.cells, par).value), 1e-8);
}

TEST(Capacity, PinnedLaplacianIsTheQuadraticForm) {
  std::mt19937_64 rng(23);
  const auto d = share(build_domain(DomainSpec::disk(), Rational(1, 16)));
  const EnergyForm form(d, EnergyParams(0.5, 2.0, 2));
  std::vector<std::uint8_t> fixed(d->size(), 0);
  for (std::size_t c = 0; c < d->size(); ++c) fixed[c] = d->in_boundary_layer(c);
  const PinnedLaplacian lap(form, fixed);
  const GridFunction u = oracle::random_interior(d, rng);
  std::vector<double> lu(d->size());
  lap.apply(u.values, lu);
  double quad = 0;
  for (std::size_t c = 0; c < d->size(); ++c) quad += u[c] * lu[c];
  EXPECT_LT(oracle::rel_err(2 * lap.scale() * quad, seminorm_p(u, form)), 1e-10);
  EXPECT_THROW(PinnedLaplacian(EnergyForm(d, EnergyParams(0.5, 3.0, 2)), fixed), std::invalid_argument);
}

TEST(Capacity, GeneralPWitnessIsAdmissibleAndBeatsExplicitFamilies) {
  const auto d = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  const WhitneyDecomposition w = whitney_decompose(*d);
  for (double p : {1.5, 3.0}) {
    const EnergyForm form(d, EnergyParams(0.5, p, 2));
    CapacitySolver solver(form);
    const DyadicCube q = w.cubes[w.generation(3).front()].cube;
    const CompactCellSet k(d, cube_cells(*d, q));
    const CapacityResult r = solver.solve(k);
    EXPECT_EQ(r.status, SolveStatus::Converged);
    EXPECT_DOUBLE_EQ(r.value, seminorm_p(r.witness, form));
    for (std::int32_t c : k.cells) EXPECT_EQ(r.witness[static_cast<std::size_t>(c)], 1.0);
    for (std::size_t c = 0; c < d->size(); ++c) {
      if (d->in_boundary_layer(c)) EXPECT_EQ(r.witness[c], 0.0);
      EXPECT_GE(r.witness[c], 0.0);
      EXPECT_LE(r.witness[c], 1.0);
    }
    const std::vector<GridFunction> family = {k.indicator(), whitney_cutoff(q, d).phi, distance_ramp(d, 0.1)};
    EXPECT_LE(r.value, capacity_upper_bound(k, family, form));
    EXPECT_LT(r.gap, 1e-3 * r.value);
  }
}

TEST(Capacity, CacheReturnsIdenticalResults) {
  const auto d = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  CapacitySolver solver{EnergyForm(d, EnergyParams(0.4, 2.0, 2))};
  const CompactCellSet k(d, {d->index(6, 6), d->index(7, 7)});
  const double a = solver.solve(k).value;
  EXPECT_EQ(solver.cache_size(), 1u);
  EXPECT_EQ(solver.solve(CompactCellSet(d, {d->index(7, 7), d->index(6, 6)})).value, a);
  EXPECT_EQ(solver.cache_size(), 1u);
}

TEST(Capacity, RejectsForeignSetsAndSmallP) {
  const auto a = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  const auto b = share(build_domain(DomainSpec::disk(), Rational(1, 16)));
  CapacitySolver solver{EnergyForm(a, EnergyParams(0.4, 2.0, 2))};
  EXPECT_THROW(solver.solve(CompactCellSet(b, {b->index(8, 8)})), std::invalid_argument);
  EXPECT_THROW(CapacitySolver(EnergyForm(a, EnergyParams(0.4, 1.0, 2))), std::domain_error);
}

TEST(FamilyEnergies, NamesTheViolatingCell) {
  const auto d = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  const EnergyForm form(d, EnergyParams(0.4, 2.0, 2));
  const CompactCellSet k(d, {d->index(6, 6)});
  GridFunction low(d);
  try {
    family_energies(k, std::span(&low, 1), form);
    FAIL();
  } catch (const InvalidCompactSet& e) {
    EXPECT_EQ(e.cell(), d->index(6, 6));
  }
  GridFunction leaky = k.indicator();
  leaky[static_cast<std::size_t>(d->index(0, 0))] = 0.5;
  EXPECT_THROW(family_energies(k, std::span(&leaky, 1), form), InvalidCompactSet);
  EXPECT_THROW(capacity_upper_bound(k, {}, form), std::invalid_argument);
}

TEST(SlitFamily, ResolutionAndAdmissibility) {
  const SlitSnowflakeSpec spec;
  EXPECT_DOUBLE_EQ(slit_family_max_h(spec, 4), 1.0 / 16);
  const auto d = share(build_domain(DomainSpec::koch_minus_slit(spec), Rational(1, 16)));
  EXPECT_THROW(slit_test_family(d, 8), InadmissibleResolution);
  const GridFunction u = slit_test_family(d, 4);
  for (std::size_t c = 0; c < d->size(); ++c) {
    if (d->in_boundary_layer(c)) EXPECT_EQ(u[c], 0.0);
    EXPECT_GE(u[c], 0.0);
    EXPECT_LE(u[c], 1.0);
  }
  const auto sq = share(build_domain(DomainSpec::square(), Rational(1, 16)));
  EXPECT_THROW(slit_test_family(sq, 2), std::invalid_argument);
}

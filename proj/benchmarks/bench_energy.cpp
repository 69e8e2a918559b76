#include <benchmark/benchmark.h>

#include <random>

#include "hardylab/capacity.hpp"
#include "hardylab/diagnostics.hpp"

using namespace hardylab;

namespace {

DomainPtr square(int den) { return share(build_domain(DomainSpec::square(), Rational(1, den))); }

GridFunction noise(const DomainPtr& d) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GridFunction f(d);
  for (std::size_t c = 0; c < d->size(); ++c)
    if (!d->in_boundary_layer(c)) f[c] = u(rng);
  return f;
}

void BM_Seminorm(benchmark::State& state) {
  const auto d = square(static_cast<int>(state.range(0)));
  const EnergyForm form(d, EnergyParams(0.5, static_cast<double>(state.range(1)) / 2.0, 2));
  const GridFunction u = noise(d);
  for (auto _ : state) benchmark::DoNotOptimize(seminorm_p(u, form));
  state.counters["cells"] = static_cast<double>(d->size());
}
BENCHMARK(BM_Seminorm)->Args({32, 4})->Args({64, 4})->Args({32, 3})->Args({64, 3})->Unit(benchmark::kMillisecond);

void BM_PinnedMatvec(benchmark::State& state) {
  const auto d = square(static_cast<int>(state.range(0)));
  const EnergyForm form(d, EnergyParams(0.5, 2.0, 2));
  std::vector<std::uint8_t> fixed(d->size(), 0);
  for (std::size_t c = 0; c < d->size(); ++c) fixed[c] = d->in_boundary_layer(c);
  const PinnedLaplacian lap(form, fixed);
  const GridFunction x = noise(d);
  std::vector<double> y(d->size());
  for (auto _ : state) {
    lap.apply(x.values, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["cells"] = static_cast<double>(d->size());
}
BENCHMARK(BM_PinnedMatvec)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_CapacityP2(benchmark::State& state) {
  const auto d = square(static_cast<int>(state.range(0)));
  const WhitneyDecomposition w = whitney_decompose(*d);
  const CompactCellSet k(d, whitney_union(w, 4), &w);
  const EnergyForm form(d, EnergyParams(0.5, 2.0, 2));
  for (auto _ : state) benchmark::DoNotOptimize(solve_capacity(k, form).value);
}
BENCHMARK(BM_CapacityP2)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

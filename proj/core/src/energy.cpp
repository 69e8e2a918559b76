#include "hardylab/energy.hpp"

#include <cmath>
#include <cstdlib>

#include "hardylab/parallel.hpp"
#include "hardylab/weights.hpp"

namespace hardylab {

namespace {

constexpr std::size_t kRowsPerChunk = 64;

enum class PowerKind { One, OneHalfTimesThree, Two, Three, General };

PowerKind power_kind(double p) {
  if (p == 1.0) return PowerKind::One;
  if (p == 1.5) return PowerKind::OneHalfTimesThree;
  if (p == 2.0) return PowerKind::Two;
  if (p == 3.0) return PowerKind::Three;
  return PowerKind::General;
}

template <PowerKind K>
inline double abs_pow(double d, double p) {
  const double a = std::abs(d);
  if constexpr (K == PowerKind::One) return a;
  if constexpr (K == PowerKind::OneHalfTimesThree) return a * std::sqrt(a);
  if constexpr (K == PowerKind::Two) return d * d;
  if constexpr (K == PowerKind::Three) return a * a * a;
  return std::pow(a, p);
}

/// |d|^{p-2} d, the derivative of |d|^p / p.
template <PowerKind K>
inline double signed_pow(double d, double p) {
  if constexpr (K == PowerKind::One) return d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
  if constexpr (K == PowerKind::OneHalfTimesThree) return d >= 0 ? std::sqrt(d) : -std::sqrt(-d);
  if constexpr (K == PowerKind::Two) return d;
  if constexpr (K == PowerKind::Three) return d * std::abs(d);
  if (d == 0.0) return 0.0;
  return (d > 0 ? 1.0 : -1.0) * std::pow(std::abs(d), p - 1);
}

template <PowerKind K, class Acc>
double pair_sum(const GridFunction& u, const EnergyForm& form) {
  const GridDomain& d = *form.domain;
  const std::size_t n = d.size();
  const double p = form.params.p;
  const auto& cells = d.cells();
  const std::size_t chunks = (n + kRowsPerChunk - 1) / kRowsPerChunk;
  std::vector<double> partial(chunks, 0.0);
  for_each_chunk(chunks, form.workers, [&](std::size_t ch) {
    Acc acc;
    const std::size_t end = std::min(n, (ch + 1) * kRowsPerChunk);
    for (std::size_t i = ch * kRowsPerChunk; i < end; ++i) {
      const double ui = u.values[i];
      const int xi = cells[i].i, yi = cells[i].j;
      Acc row;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double diff = ui - u.values[j];
        if (diff == 0.0) continue;
        row.add(abs_pow<K>(diff, p) * form.kernel.at(std::abs(cells[j].i - xi), std::abs(cells[j].j - yi)));
      }
      acc.add(row.value());
    }
    partial[ch] = acc.value();
  });
  Acc total;
  for (double v : partial) total.add(v);
  return 2.0 * form.kernel.scale() * total.value();
}

struct PlainSum {
  double s = 0.0;
  void add(double v) { s += v; }
  double value() const { return s; }
};

template <class Acc>
double dispatch(const GridFunction& u, const EnergyForm& form) {
  switch (power_kind(form.params.p)) {
    case PowerKind::One: return pair_sum<PowerKind::One, Acc>(u, form);
    case PowerKind::OneHalfTimesThree: return pair_sum<PowerKind::OneHalfTimesThree, Acc>(u, form);
    case PowerKind::Two: return pair_sum<PowerKind::Two, Acc>(u, form);
    case PowerKind::Three: return pair_sum<PowerKind::Three, Acc>(u, form);
    case PowerKind::General: return pair_sum<PowerKind::General, Acc>(u, form);
  }
  return 0.0;
}

template <PowerKind K>
std::vector<double> gradient(const GridFunction& u, const EnergyForm& form) {
  const GridDomain& d = *form.domain;
  const std::size_t n = d.size();
  const double p = form.params.p;
  const auto& cells = d.cells();
  std::vector<double> g(n, 0.0);
  // Row i collects its full sum over j, so each row is independent and the result is
  // reproducible for any worker count.
  const std::size_t chunks = (n + kRowsPerChunk - 1) / kRowsPerChunk;
  for_each_chunk(chunks, form.workers, [&](std::size_t ch) {
    const std::size_t end = std::min(n, (ch + 1) * kRowsPerChunk);
    for (std::size_t i = ch * kRowsPerChunk; i < end; ++i) {
      const double ui = u.values[i];
      const int xi = cells[i].i, yi = cells[i].j;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double diff = ui - u.values[j];
        if (diff == 0.0) continue;
        s += signed_pow<K>(diff, p) * form.kernel.at(std::abs(cells[j].i - xi), std::abs(cells[j].j - yi));
      }
      g[i] = 2.0 * p * form.kernel.scale() * s;
    }
  });
  return g;
}

void check_same_domain(const GridFunction& u, const EnergyForm& form) {
  if (!u.domain || !form.domain) throw std::invalid_argument("energy: missing domain");
  if (u.domain != form.domain && u.domain->fingerprint() != form.domain->fingerprint())
    throw std::invalid_argument("energy: function lives on a different domain");
}

}  // namespace

EnergyForm::EnergyForm(DomainPtr d, const EnergyParams& p, SummationMode m, int w)
    : params(p), domain(std::move(d)), mode(m), workers(w) {
  params.validate();
  if (params.n != domain->dim()) throw std::invalid_argument("EnergyForm: dimension mismatch");
  kernel = KernelTable(domain->nx(), domain->ny(), params, domain->hv());
}

double seminorm_p(const GridFunction& u, const EnergyForm& form) {
  check_same_domain(u, form);
  if (form.mode == SummationMode::Compensated) return dispatch<CompensatedSum>(u, form);
  return dispatch<PlainSum>(u, form);
}

std::vector<double> seminorm_gradient(const GridFunction& u, const EnergyForm& form) {
  check_same_domain(u, form);
  form.params.require_p_above_one("seminorm_gradient");
  switch (power_kind(form.params.p)) {
    case PowerKind::One: break;
    case PowerKind::OneHalfTimesThree: return gradient<PowerKind::OneHalfTimesThree>(u, form);
    case PowerKind::Two: return gradient<PowerKind::Two>(u, form);
    case PowerKind::Three: return gradient<PowerKind::Three>(u, form);
    case PowerKind::General: return gradient<PowerKind::General>(u, form);
  }
  return gradient<PowerKind::General>(u, form);
}

Bracket seminorm_zero_extended_p(const GridFunction& u, const EnergyForm& form, const WeightField& exterior) {
  if (exterior.kind != WeightKind::Exterior) throw std::invalid_argument("zero extension needs the exterior weight");
  const double inner = seminorm_p(u, form);
  const Bracket mass = weighted_mass_bracket(u, exterior, form.params.p);
  return {inner + 2.0 * mass.lo, inner + 2.0 * mass.hi};
}

}  // namespace hardylab

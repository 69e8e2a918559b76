#include "hardylab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "hardylab/parallel.hpp"

namespace hardylab {

namespace {

constexpr std::uint8_t kFree = 0;
constexpr std::uint8_t kOne = 1;
constexpr std::uint8_t kZero = 2;

constexpr double kConstraintTolerance = 1e-9;

std::vector<std::uint8_t> roles(const CompactCellSet& k) {
  const GridDomain& d = *k.domain;
  std::vector<std::uint8_t> r(d.size(), kFree);
  for (std::size_t c = 0; c < d.size(); ++c)
    if (d.in_boundary_layer(c)) r[c] = kZero;
  for (std::int32_t c : k.cells) r[static_cast<std::size_t>(c)] = kOne;
  return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// CompactCellSet

CompactCellSet::CompactCellSet(DomainPtr d, std::vector<std::int32_t> c, const WhitneyDecomposition* whitney)
    : domain(std::move(d)), cells(std::move(c)) {
  if (!domain) throw std::invalid_argument("CompactCellSet: missing domain");
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (cells.empty()) throw InvalidCompactSet("compact set is empty", -1);
  double m = std::numeric_limits<double>::infinity();
  for (std::int32_t cell : cells) {
    if (cell < 0 || static_cast<std::size_t>(cell) >= domain->size())
      throw InvalidCompactSet("cell index out of range", cell);
    const auto idx = static_cast<std::size_t>(cell);
    if (domain->in_boundary_layer(idx)) throw InvalidCompactSet("compact set meets the boundary layer", cell);
    if (whitney && whitney->cubes[static_cast<std::size_t>(whitney->owner[idx])].boundary_truncated)
      throw InvalidCompactSet("compact set meets a boundary-truncated cube", cell);
    m = std::min(m, domain->dist()[idx]);
  }
  margin = m - 0.5 * std::sqrt(static_cast<double>(domain->dim())) * domain->hv();
}

std::uint64_t CompactCellSet::key() const {
  std::uint64_t h = 14695981039346656037ull ^ domain->fingerprint();
  for (std::int32_t c : cells) {
    h ^= static_cast<std::uint32_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

GridFunction CompactCellSet::indicator() const { return hardylab::indicator(domain, cells); }

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max-iter";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------------------------
// PinnedLaplacian

PinnedLaplacian::PinnedLaplacian(const EnergyForm& form, std::vector<std::uint8_t> fixed)
    : PinnedLaplacian(form, std::move(fixed), std::make_shared<LatticeConvolution>(*form.domain, form.kernel)) {}

PinnedLaplacian::PinnedLaplacian(const EnergyForm& form, std::vector<std::uint8_t> fixed,
                                 std::shared_ptr<LatticeConvolution> convolution)
    : conv_(std::move(convolution)), fixed_(std::move(fixed)), scale_(form.kernel.scale()) {
  if (form.params.p != 2.0) throw std::invalid_argument("PinnedLaplacian: requires p = 2");
  if (fixed_.size() != form.domain->size()) throw std::invalid_argument("PinnedLaplacian: mask size mismatch");
  work_.resize(fixed_.size());
}

void PinnedLaplacian::weights(std::span<const double> in, std::span<double> out) const { conv_->apply(in, out); }

void PinnedLaplacian::apply(std::span<const double> x, std::span<double> out) const {
  const std::size_t n = fixed_.size();
  std::vector<double> masked(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed_[i]) masked[i] = x[i];
  conv_->apply(masked, work_);
  const auto& deg = conv_->degree();
  for (std::size_t i = 0; i < n; ++i) out[i] = fixed_[i] ? 0.0 : deg[i] * masked[i] - work_[i];
}

PinnedLaplacian::Solve PinnedLaplacian::solve(std::span<const double> b, std::span<double> x, double tol,
                                              int max_iterations) const {
  const std::size_t n = fixed_.size();
  const auto& deg = conv_->degree();
  std::vector<double> r(n, 0.0), z(n, 0.0), p(n, 0.0), q(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (fixed_[i]) x[i] = 0.0;
  apply(x, q);
  double bnorm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed_[i]) {
      r[i] = b[i] - q[i];
      bnorm2 += b[i] * b[i];
    }
  const double target = tol * std::sqrt(bnorm2);
  Solve out;
  if (bnorm2 == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    out.converged = true;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = fixed_[i] ? 0.0 : r[i] / deg[i];
  p = z;
  double rho = dot(r, z);
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (std::sqrt(dot(r, r)) <= target) break;
    apply(p, q);
    const double alpha = rho / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = fixed_[i] ? 0.0 : r[i] / deg[i];
    const double rho_next = dot(r, z);
    const double beta = rho_next / rho;
    rho = rho_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  apply(x, q);
  double rr = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed_[i]) rr += (b[i] - q[i]) * (b[i] - q[i]);
  out.iterations = it;
  out.residual_norm = std::sqrt(rr);
  out.converged = out.residual_norm <= 2 * target;
  return out;
}

// ---------------------------------------------------------------------------------------------
// CapacitySolver

CapacitySolver::CapacitySolver(EnergyForm form, CapacityOptions options)
    : form_(std::move(form)), options_(options) {
  form_.params.require_p_above_one("solve_capacity");
  if (form_.params.p == 2.0) {
    conv_ = std::make_shared<LatticeConvolution>(*form_.domain, form_.kernel);
  } else if (options_.restart) {
    EnergyForm quad(form_.domain, EnergyParams(form_.params.s, 2.0, form_.params.n), form_.mode, form_.workers);
    quadratic_companion_ = std::make_unique<CapacitySolver>(std::move(quad), options_);
  }
}

std::size_t CapacitySolver::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

CapacityResult CapacitySolver::solve(const CompactCellSet& k) {
  if (k.domain != form_.domain && k.domain->fingerprint() != form_.domain->fingerprint())
    throw std::invalid_argument("solve_capacity: compact set lives on a different domain");
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(k.cells); it != cache_.end()) return it->second;
  }
  CapacityResult r = solve_uncached(k);
  std::lock_guard lock(mutex_);
  cache_.emplace(k.cells, r);
  return r;
}

CapacityResult CapacitySolver::solve_uncached(const CompactCellSet& k) {
  if (form_.params.p == 2.0) return solve_quadratic(k);
  CapacityResult cold = solve_from(k, k.indicator());
  if (!quadratic_companion_) return cold;
  const CapacityResult seed = quadratic_companion_->solve(k);
  CapacityResult warm = solve_from(k, seed.witness);
  const double spread = std::abs(cold.value - warm.value);
  CapacityResult& best = warm.value < cold.value ? warm : cold;
  best.gap = spread + cold.gap + warm.gap;
  best.iterations = cold.iterations + warm.iterations;
  best.status = cold.status == SolveStatus::Converged && warm.status == SolveStatus::Converged ? SolveStatus::Converged
                                                                                              : SolveStatus::MaxIter;
  return best;
}

CapacityResult CapacitySolver::solve_quadratic(const CompactCellSet& k) const {
  const GridDomain& d = *form_.domain;
  const std::size_t n = d.size();
  const std::vector<std::uint8_t> role = roles(k);
  std::vector<std::uint8_t> fixed(n);
  for (std::size_t i = 0; i < n; ++i) fixed[i] = role[i] != kFree;
  PinnedLaplacian lap(form_, fixed, conv_);

  std::vector<double> chi_k(n, 0.0), chi_fixed(n, 0.0), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    chi_k[i] = role[i] == kOne ? 1.0 : 0.0;
    chi_fixed[i] = fixed[i] ? 1.0 : 0.0;
  }
  lap.weights(chi_k, b);
  lap.weights(chi_fixed, c);

  CapacityResult out;
  std::vector<double> x(n, 0.0);
  bool any_free = false;
  double cmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (!fixed[i]) {
      any_free = true;
      cmin = std::min(cmin, c[i]);
      x[i] = b[i] / c[i];
    }
  // Certified sup-norm distance to the exact minimiser: ||x - x*||_2 <= ||r|| / lambda_min(L_FF).
  double slack = 1e-12;
  if (any_free) {
    const auto s = lap.solve(b, x, options_.residual_tolerance, options_.max_cg_iterations);
    out.iterations = s.iterations;
    out.status = s.converged ? SolveStatus::Converged : SolveStatus::MaxIter;
    out.gap = 2.0 * lap.scale() * s.residual_norm * s.residual_norm / cmin;
    slack += s.residual_norm / cmin;
  }
  GridFunction w(form_.domain);
  for (std::size_t i = 0; i < n; ++i) {
    double v = role[i] == kOne ? 1.0 : (role[i] == kZero ? 0.0 : x[i]);
    if (v < -slack || v > 1.0 + slack)
      throw std::logic_error("capacity: p = 2 minimizer left [0,1]; the maximum principle failed (value " +
                             std::to_string(v) + ", " + std::to_string(out.iterations) + " iterations, status " +
                             to_string(out.status) + ")");
    w[i] = std::clamp(v, 0.0, 1.0);
  }
  out.witness = std::move(w);
  out.value = seminorm_p(out.witness, form_);
  return out;
}

CapacityResult CapacitySolver::solve_from(const CompactCellSet& k, const GridFunction& start) const {
  if (form_.params.p == 2.0) return solve_quadratic(k);
  const std::size_t n = form_.domain->size();
  const std::vector<std::uint8_t> role = roles(k);
  GridFunction x(form_.domain);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = role[i] == kOne ? 1.0 : (role[i] == kZero ? 0.0 : std::clamp(start[i], 0.0, 1.0));

  // Nonmonotone spectral projected gradient on the box {u_K = 1, u_Z = 0, 0 <= u <= 1}.
  constexpr int kMemory = 10;
  constexpr double kArmijo = 1e-4;
  double energy = seminorm_p(x, form_);
  std::vector<double> g = seminorm_gradient(x, form_);
  std::deque<double> recent{energy};
  std::vector<double> history{energy};
  double gmax = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (role[i] == kFree) gmax = std::max(gmax, std::abs(g[i]));
  double step = gmax > 0 ? 1.0 / gmax : 1.0;

  CapacityResult out;
  out.status = SolveStatus::MaxIter;
  GridFunction trial(form_.domain);
  std::vector<double> dir(n, 0.0);
  int it = 0;
  double stagnation = std::numeric_limits<double>::infinity();
  for (; it < options_.max_descent_iterations; ++it) {
    double dnorm = 0.0, gd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dir[i] = role[i] == kFree ? std::clamp(x[i] - step * g[i], 0.0, 1.0) - x[i] : 0.0;
      dnorm = std::max(dnorm, std::abs(dir[i]));
      gd += g[i] * dir[i];
    }
    if (dnorm <= 1e-15 || gd >= 0.0) {
      stagnation = 0.0;
      out.status = SolveStatus::Converged;
      break;
    }
    const double reference = *std::max_element(recent.begin(), recent.end());
    double t = 1.0, e_trial = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + t * dir[i];
      e_trial = seminorm_p(trial, form_);
      if (e_trial <= reference + kArmijo * t * gd) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      stagnation = 0.0;
      out.status = SolveStatus::Converged;
      break;
    }
    std::vector<double> g_next = seminorm_gradient(trial, form_);
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (role[i] != kFree) continue;
      const double si = trial[i] - x[i];
      ss += si * si;
      sy += si * (g_next[i] - g[i]);
    }
    step = sy > 0 ? std::clamp(ss / sy, 1e-30, 1e30) : step * 2;
    std::swap(x.values, trial.values);
    g = std::move(g_next);
    energy = e_trial;
    recent.push_back(energy);
    if (recent.size() > kMemory) recent.pop_front();
    history.push_back(energy);
    const std::size_t w = static_cast<std::size_t>(options_.window);
    if (history.size() > w) {
      const double best = *std::min_element(history.end() - static_cast<std::ptrdiff_t>(w) - 1, history.end());
      const double old = history[history.size() - 1 - w];
      stagnation = std::max(0.0, old - best);
      if (stagnation <= options_.stagnation * best) {
        out.status = SolveStatus::Converged;
        ++it;
        break;
      }
    }
  }
  // Nonmonotone steps may end above the best iterate seen; the witness is the final iterate and
  // its energy is recomputed.
  out.iterations = it;
  out.witness = std::move(x);
  out.value = seminorm_p(out.witness, form_);
  out.gap = std::isfinite(stagnation) ? stagnation : out.value;
  return out;
}

CapacityResult solve_capacity(const CompactCellSet& k, const EnergyForm& form, const CapacityOptions& options) {
  CapacitySolver solver(form, options);
  return solver.solve(k);
}

// ---------------------------------------------------------------------------------------------
// Explicit admissible families

std::vector<double> family_energies(const CompactCellSet& k, std::span<const GridFunction> family,
                                    const EnergyForm& form) {
  std::vector<double> out;
  out.reserve(family.size());
  const GridDomain& d = *k.domain;
  for (const GridFunction& u : family) {
    if (u.size() != d.size()) throw std::invalid_argument("family member lives on a different domain");
    for (std::int32_t c : k.cells)
      if (u[static_cast<std::size_t>(c)] < 1.0 - kConstraintTolerance)
        throw InvalidCompactSet("family member is below 1 on K", c);
    for (std::size_t c = 0; c < d.size(); ++c)
      if (d.in_boundary_layer(c) && u[c] != 0.0)
        throw InvalidCompactSet("family member does not vanish on the boundary layer", static_cast<std::int32_t>(c));
    out.push_back(seminorm_p(u, form));
  }
  return out;
}

double capacity_upper_bound(const CompactCellSet& k, std::span<const GridFunction> family, const EnergyForm& form) {
  if (family.empty()) throw std::invalid_argument("capacity_upper_bound: empty family");
  const std::vector<double> e = family_energies(k, family, form);
  return *std::min_element(e.begin(), e.end());
}

double slit_family_max_h(const SlitSnowflakeSpec& spec, int m) { return spec.collar_radius(m) / 2.0; }

GridFunction slit_test_family(const DomainPtr& domain, int m) {
  if (domain->spec().kind != DomainKind::KochMinusSlit)
    throw std::invalid_argument("slit_test_family: needs a koch_minus_slit domain");
  if (m < 1) throw std::invalid_argument("slit_test_family: m must be positive");
  const SlitSnowflakeSpec& spec = domain->spec().snowflake;
  const double collar = spec.collar_radius(m);
  const Box r = spec.r_box();
  if (spec.slit_half_length() + collar >= spec.r_side / 2)
    throw std::invalid_argument("slit_test_family: collar L_m is not compactly inside R");
  if (domain->hv() > slit_family_max_h(spec, m) * (1 + 1e-12)) {
    const int e = static_cast<int>(std::floor(std::log2(slit_family_max_h(spec, m))));
    throw InadmissibleResolution("cell size does not resolve the slit collar for m = " + std::to_string(m),
                                 e >= 0 ? Rational(std::int64_t{1} << e, 1) : Rational(1, std::int64_t{1} << -e));
  }
  // Distance from R to the outer polygon, i.e. dG' without the slit.
  double dr = std::numeric_limits<double>::infinity();
  for (const auto& loop : domain->loops())
    for (const Segment& s : loop_segments(loop)) dr = std::min(dr, segment_box_distance(s, r));
  const double ramp = dr / 2;
  const Segment slit = spec.slit();

  GridFunction u(domain);
  for (std::size_t c = 0; c < u.size(); ++c) {
    const Point x = domain->center(c);
    const double v = std::clamp(1.0 - point_box_distance(x, r) / ramp, 0.0, 1.0);
    const double w = std::clamp(2.0 - 2.0 * point_segment_distance(x, slit) / collar, 0.0, 1.0);
    u[c] = v - w;
  }
  return u;
}

}  // namespace hardylab

#pragma once

#include <stdexcept>
#include <string>

namespace hardylab {

/// Exponents of the fractional (s,p)-energy together with the spatial dimension.
struct EnergyParams {
  double s = 0.5;
  double p = 2.0;
  int n = 2;

  EnergyParams() = default;
  EnergyParams(double s_, double p_, int n_) : s(s_), p(p_), n(n_) { validate(); }

  void validate() const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("EnergyParams: s must lie in (0,1)");
    if (!(p > 0.0)) throw std::invalid_argument("EnergyParams: p must be positive");
    if (n != 1 && n != 2) throw std::invalid_argument("EnergyParams: n must be 1 or 2");
  }

  double sp() const { return s * p; }

  /// Exponent of the kernel |x-y|^{-(n+sp)}.
  double kernel_exponent() const { return n + sp(); }

  /// Scaling exponent of the energy, n - sp.
  double homogeneity() const { return n - sp(); }

  /// Fractional Sobolev exponent np/(n-sp); only defined for sp < n.
  double sobolev_exponent() const {
    if (!(sp() < n)) throw std::domain_error("Sobolev exponent requires sp < n");
    return n * p / (n - sp());
  }

  void require_p_above_one(const std::string& what) const {
    if (!(p > 1.0)) throw std::domain_error(what + " requires p > 1");
  }
  void require_subcritical(const std::string& what) const {
    if (!(sp() < n)) throw std::domain_error(what + " requires sp < n");
  }
};

}  // namespace hardylab

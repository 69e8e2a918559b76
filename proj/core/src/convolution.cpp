#include "hardylab/convolution.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace hardylab {

namespace {
// FFTW's planner is not re-entrant.
std::mutex planner_mutex;
}  // namespace

struct LatticeConvolution::Plan {
  int px = 0;
  int py = 0;
  std::size_t nreal = 0;
  std::size_t ncomplex = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_complex* kernel = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Plan() {
    std::lock_guard lock(planner_mutex);
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
    fftw_free(kernel);
  }
};

LatticeConvolution::LatticeConvolution(const GridDomain& domain, const KernelTable& kernel)
    : domain_(&domain), plan_(std::make_unique<Plan>()) {
  if (kernel.nx() < domain.nx() || kernel.ny() < domain.ny())
    throw std::invalid_argument("LatticeConvolution: kernel table smaller than the lattice");
  Plan& p = *plan_;
  p.px = 2 * domain.nx();
  p.py = domain.ny() == 1 ? 1 : 2 * domain.ny();
  p.nreal = static_cast<std::size_t>(p.px) * p.py;
  p.ncomplex = static_cast<std::size_t>(p.py) * (p.px / 2 + 1);
  p.real = fftw_alloc_real(p.nreal);
  p.spec = fftw_alloc_complex(p.ncomplex);
  p.kernel = fftw_alloc_complex(p.ncomplex);
  {
    std::lock_guard lock(planner_mutex);
    // Row-major with y as the slow index: dims (py, px).
    if (p.py == 1) {
      p.forward = fftw_plan_dft_r2c_1d(p.px, p.real, p.spec, FFTW_ESTIMATE);
      p.backward = fftw_plan_dft_c2r_1d(p.px, p.spec, p.real, FFTW_ESTIMATE);
    } else {
      p.forward = fftw_plan_dft_r2c_2d(p.py, p.px, p.real, p.spec, FFTW_ESTIMATE);
      p.backward = fftw_plan_dft_c2r_2d(p.py, p.px, p.spec, p.real, FFTW_ESTIMATE);
    }
  }
  if (!p.forward || !p.backward) throw std::runtime_error("LatticeConvolution: FFT planning failed");

  const int nx = domain.nx(), ny = domain.ny();
  for (int y = 0; y < p.py; ++y)
    for (int x = 0; x < p.px; ++x) {
      const int a = x < nx ? x : p.px - x;
      const int b = y < ny ? y : p.py - y;
      const bool inside = a < nx && b < ny;
      p.real[static_cast<std::size_t>(y) * p.px + x] = inside ? kernel.at(a, b) : 0.0;
    }
  fftw_execute(p.forward);
  std::memcpy(p.kernel, p.spec, sizeof(fftw_complex) * p.ncomplex);

  std::vector<double> ones(domain.size(), 1.0);
  degree_.assign(domain.size(), 0.0);
  apply(ones, degree_);
}

LatticeConvolution::~LatticeConvolution() = default;

void LatticeConvolution::apply(std::span<const double> in, std::span<double> out) const {
  const GridDomain& d = *domain_;
  if (in.size() != d.size() || out.size() != d.size()) throw std::invalid_argument("LatticeConvolution: size mismatch");
  Plan& p = *plan_;
  std::fill(p.real, p.real + p.nreal, 0.0);
  for (std::size_t c = 0; c < d.size(); ++c) {
    const CellIndex& q = d.cell(c);
    p.real[static_cast<std::size_t>(q.j) * p.px + q.i] = in[c];
  }
  fftw_execute(p.forward);
  for (std::size_t k = 0; k < p.ncomplex; ++k) {
    const double re = p.spec[k][0] * p.kernel[k][0] - p.spec[k][1] * p.kernel[k][1];
    const double im = p.spec[k][0] * p.kernel[k][1] + p.spec[k][1] * p.kernel[k][0];
    p.spec[k][0] = re;
    p.spec[k][1] = im;
  }
  fftw_execute(p.backward);
  const double norm = 1.0 / static_cast<double>(p.nreal);
  for (std::size_t c = 0; c < d.size(); ++c) {
    const CellIndex& q = d.cell(c);
    out[c] = p.real[static_cast<std::size_t>(q.j) * p.px + q.i] * norm;
  }
}

}  // namespace hardylab

#include "l3mhd/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "l3mhd/errors.hpp"

namespace l3mhd {

namespace {
// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Grid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

Grid::Grid(int n, double box_length, bool dealias)
    : n_(n), box_length_(box_length), dealias_(dealias) {
  if (n < 4 || n % 2 != 0) throw InvalidGrid("n must be even and >= 4, got " + std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw InvalidGrid("box_length must be positive and finite");

  max_mode_ = dealias ? (n - 1) / 3 : n / 2 - 1;

  const std::size_t size = spectral_size();
  kx_.resize(size);
  ky_.resize(size);
  kz_.resize(size);
  k2_.resize(size);
  weight_.resize(size);
  mask_.resize(size);
  for (int ix = 0; ix < n; ++ix) {
    const int mx = signed_mode(ix);
    for (int iy = 0; iy < n; ++iy) {
      const int my = signed_mode(iy);
      for (int iz = 0; iz < nz(); ++iz) {
        const int mz = iz;
        const std::size_t idx = spectral_index(ix, iy, iz);
        kx_[idx] = wavenumber(mx);
        ky_[idx] = wavenumber(my);
        kz_[idx] = wavenumber(mz);
        k2_[idx] = kx_[idx] * kx_[idx] + ky_[idx] * ky_[idx] + kz_[idx] * kz_[idx];
        weight_[idx] = (iz == 0 || iz == n / 2) ? 1.0 : 2.0;
        const bool keep = std::abs(mx) <= max_mode_ && std::abs(my) <= max_mode_ &&
                          mz <= max_mode_;
        mask_[idx] = keep ? 1 : 0;
      }
    }
  }

  plans_ = std::make_unique<Plans>();
  std::vector<double> phys(physical_size());
  std::vector<Complex> spec(size);
  auto* cspec = reinterpret_cast<fftw_complex*>(spec.data());
  std::lock_guard lock(planner_mutex());
  plans_->r2c = fftw_plan_dft_r2c_3d(n, n, n, phys.data(), cspec, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->c2r = fftw_plan_dft_c2r_3d(n, n, n, cspec, phys.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->r2c || !plans_->c2r) throw InvalidGrid("FFTW planning failed");
}

Grid::~Grid() = default;

double Grid::cell_volume() const {
  const double h = box_length_ / n_;
  return h * h * h;
}

double Grid::wavenumber(int mode) const {
  return 2.0 * std::numbers::pi * mode / box_length_;
}

void Grid::forward(std::span<const double> physical, std::span<Complex> spectral) const {
  // Out-of-place r2c leaves its input intact.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(physical.data()),
                       reinterpret_cast<fftw_complex*>(spectral.data()));
  const double scale = 1.0 / static_cast<double>(physical_size());
  for (auto& c : spectral) c *= scale;
}

void Grid::inverse(std::span<const Complex> spectral, std::span<double> physical) const {
  std::vector<Complex> scratch(spectral.begin(), spectral.end());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()),
                       physical.data());
}

GridPtr make_grid(int n, double box_length, bool dealias) {
  return std::make_shared<const Grid>(n, box_length, dealias);
}

bool same_grid(const Grid& a, const Grid& b) {
  return &a == &b || (a.n() == b.n() && a.box_length() == b.box_length() &&
                      a.dealias() == b.dealias());
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (!same_grid(a, b)) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

}  // namespace l3mhd

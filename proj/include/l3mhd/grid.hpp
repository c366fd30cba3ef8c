#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace l3mhd {

using Complex = std::complex<double>;

/// Periodic cube [0,L)^3 sampled on n^3 collocation points.
///
/// Spectral data is stored in the FFTW real-to-complex layout: index
/// (ix, iy, iz) with ix, iy in [0,n) and iz in [0, n/2]. Signed modes are
/// m = i for i < n/2 and m = i - n otherwise, so the x/y Nyquist index maps
/// to -n/2. Nyquist modes are never retained.
///
/// With dealiasing on, a mode is retained iff 3|m_d| < n in every direction
/// (cube 2/3 rule). Every field produced by the library lives inside the
/// retained band, which makes quadratic products alias-free and triple
/// products exactly integrable on the grid.
class Grid {
 public:
  Grid(int n, double box_length, bool dealias = true);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const { return n_; }
  int nz() const { return n_ / 2 + 1; }
  double box_length() const { return box_length_; }
  bool dealias() const { return dealias_; }
  double volume() const { return box_length_ * box_length_ * box_length_; }
  double cell_volume() const;
  /// Largest retained |m| per direction.
  int max_retained_mode() const { return max_mode_; }

  std::size_t physical_size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * n_ * nz(); }
  std::size_t spectral_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_ + iy) * nz() + iz;
  }
  std::size_t physical_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_ + iy) * n_ + iz;
  }

  /// Signed integer mode of an x/y storage index.
  int signed_mode(int index) const { return index < n_ / 2 ? index : index - n_; }
  double wavenumber(int mode) const;

  std::span<const double> kx() const { return kx_; }
  std::span<const double> ky() const { return ky_; }
  std::span<const double> kz() const { return kz_; }
  std::span<const double> k2() const { return k2_; }
  /// 1 for retained modes, 0 otherwise.
  std::span<const unsigned char> mask() const { return mask_; }
  /// Multiplicity of a stored mode in the full spectrum (1 or 2).
  std::span<const double> weight() const { return weight_; }

  /// Normalized forward transform: f(x) = sum_k c_k exp(i k.x).
  void forward(std::span<const double> physical, std::span<Complex> spectral) const;
  /// Inverse transform; the input is left untouched.
  void inverse(std::span<const Complex> spectral, std::span<double> physical) const;

 private:
  int n_;
  double box_length_;
  bool dealias_;
  int max_mode_;
  std::vector<double> kx_, ky_, kz_, k2_, weight_;
  std::vector<unsigned char> mask_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws InvalidGrid unless n is even, n >= 4 and box_length > 0.
GridPtr make_grid(int n, double box_length, bool dealias = true);

bool same_grid(const Grid& a, const Grid& b);
/// Throws GridMismatch naming `where` when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace l3mhd

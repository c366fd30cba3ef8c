#pragma once

#include <array>
#include <span>
#include <vector>

#include "l3mhd/grid.hpp"

namespace l3mhd {

/// Real scalar field held by its spectral coefficients.
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid);
  ScalarField(GridPtr grid, std::vector<Complex> coeffs);

  static ScalarField from_physical(GridPtr grid, std::span<const double> values);
  std::vector<double> to_physical() const;

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  /// Largest |c(-m) - conj(c(m))| over the self-conjugate planes, relative
  /// to the largest coefficient. Zero for an exactly real field.
  double hermitian_defect() const;
  /// Replaces each conjugate pair in the self-conjugate planes by its
  /// Hermitian average.
  void enforce_hermitian();

 private:
  GridPtr grid_;
  std::vector<Complex> coeffs_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Three-component real vector field. `solenoidal` asserts div = 0; it is
/// set by operations that guarantee it (projection, heat flow, Duhamel).
class VectorField {
 public:
  explicit VectorField(GridPtr grid);
  VectorField(ScalarField x, ScalarField y, ScalarField z, bool solenoidal = false);

  static VectorField from_physical(GridPtr grid, std::span<const double> x,
                                   std::span<const double> y,
                                   std::span<const double> z);

  const Grid& grid() const { return comp_[0].grid(); }
  const GridPtr& grid_ptr() const { return comp_[0].grid_ptr(); }

  const ScalarField& operator[](int i) const { return comp_[i]; }
  ScalarField& operator[](int i) { return comp_[i]; }

  bool solenoidal() const { return solenoidal_; }
  void set_solenoidal(bool flag) { solenoidal_ = flag; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);

  /// Largest relative divergence max_k |k.u(k)| / |u(k)| over k != 0.
  double divergence_defect() const;
  double hermitian_defect() const;

 private:
  std::array<ScalarField, 3> comp_;
  bool solenoidal_ = false;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// 3x3 tensor field, component (i,j) stored at 3*i + j.
class TensorField {
 public:
  explicit TensorField(GridPtr grid);

  const Grid& grid() const { return comp_[0].grid(); }
  const GridPtr& grid_ptr() const { return comp_[0].grid_ptr(); }
  const ScalarField& operator()(int i, int j) const { return comp_[3 * i + j]; }
  ScalarField& operator()(int i, int j) { return comp_[3 * i + j]; }

  double hermitian_defect() const;

 private:
  std::vector<ScalarField> comp_;
};

/// Spectral L2 inner product <f,g> = integral of f g over the box.
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& f, const VectorField& g);

}  // namespace l3mhd

#include "l3mhd/field.hpp"

#include <algorithm>
#include <cmath>

#include "l3mhd/errors.hpp"

namespace l3mhd {

ScalarField::ScalarField(GridPtr grid)
    : grid_(std::move(grid)), coeffs_(grid_->spectral_size(), Complex{}) {}

ScalarField::ScalarField(GridPtr grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->spectral_size())
    throw GridMismatch("coefficient count does not match grid");
}

ScalarField ScalarField::from_physical(GridPtr grid, std::span<const double> values) {
  if (values.size() != grid->physical_size())
    throw GridMismatch("sample count does not match grid");
  ScalarField f(grid);
  grid->forward(values, f.coeffs_);
  return f;
}

std::vector<double> ScalarField::to_physical() const {
  std::vector<double> out(grid_->physical_size());
  grid_->inverse(coeffs_, out);
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*grid_, o.grid(), "ScalarField +=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*grid_, o.grid(), "ScalarField -=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

namespace {
template <class F>
void for_each_conjugate_pair(const Grid& g, F&& f) {
  const int n = g.n();
  for (int iz : {0, n / 2}) {
    for (int ix = 0; ix < n; ++ix) {
      for (int iy = 0; iy < n; ++iy) {
        const int jx = (n - ix) % n;
        const int jy = (n - iy) % n;
        const std::size_t a = g.spectral_index(ix, iy, iz);
        const std::size_t b = g.spectral_index(jx, jy, iz);
        if (a <= b) f(a, b);
      }
    }
  }
}
}  // namespace

double ScalarField::hermitian_defect() const {
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for_each_conjugate_pair(*grid_, [&](std::size_t a, std::size_t b) {
    worst = std::max(worst, std::abs(coeffs_[a] - std::conj(coeffs_[b])));
  });
  return worst / scale;
}

void ScalarField::enforce_hermitian() {
  for_each_conjugate_pair(*grid_, [&](std::size_t a, std::size_t b) {
    const Complex avg = 0.5 * (coeffs_[a] + std::conj(coeffs_[b]));
    coeffs_[a] = avg;
    coeffs_[b] = std::conj(avg);
  });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(GridPtr grid)
    : comp_{ScalarField(grid), ScalarField(grid), ScalarField(grid)}, solenoidal_(true) {}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z, bool solenoidal)
    : comp_{std::move(x), std::move(y), std::move(z)}, solenoidal_(solenoidal) {
  require_same_grid(comp_[0].grid(), comp_[1].grid(), "VectorField");
  require_same_grid(comp_[0].grid(), comp_[2].grid(), "VectorField");
}

VectorField VectorField::from_physical(GridPtr grid, std::span<const double> x,
                                       std::span<const double> y, std::span<const double> z) {
  return VectorField(ScalarField::from_physical(grid, x), ScalarField::from_physical(grid, y),
                     ScalarField::from_physical(grid, z), false);
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) comp_[i] += o.comp_[i];
  solenoidal_ = solenoidal_ && o.solenoidal_;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (int i = 0; i < 3; ++i) comp_[i] -= o.comp_[i];
  solenoidal_ = solenoidal_ && o.solenoidal_;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : comp_) c *= s;
  return *this;
}

double VectorField::divergence_defect() const {
  const Grid& g = grid();
  const auto kx = g.kx(), ky = g.ky(), kz = g.kz(), k2 = g.k2();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    if (k2[i] == 0.0) continue;
    const Complex a = comp_[0][i], b = comp_[1][i], c = comp_[2][i];
    const double mag = std::sqrt(std::norm(a) + std::norm(b) + std::norm(c));
    if (mag == 0.0) continue;
    const Complex dot = kx[i] * a + ky[i] * b + kz[i] * c;
    worst = std::max(worst, std::abs(dot) / (std::sqrt(k2[i]) * mag));
  }
  return worst;
}

double VectorField::hermitian_defect() const {
  return std::max({comp_[0].hermitian_defect(), comp_[1].hermitian_defect(),
                   comp_[2].hermitian_defect()});
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

TensorField::TensorField(GridPtr grid) : comp_(9, ScalarField(grid)) {}

double TensorField::hermitian_defect() const {
  double worst = 0.0;
  for (const auto& c : comp_) worst = std::max(worst, c.hermitian_defect());
  return worst;
}

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  const auto w = f.grid().weight();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * (f[i] * std::conj(g[i])).real();
  return acc * f.grid().volume();
}

double inner(const VectorField& f, const VectorField& g) {
  return inner(f[0], g[0]) + inner(f[1], g[1]) + inner(f[2], g[2]);
}

}  // namespace l3mhd

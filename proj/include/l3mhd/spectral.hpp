#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "l3mhd/field.hpp"

namespace l3mhd {

enum class MollifierKind {
  gaussian,  ///< exp(-eps^2 |k|^2 / 2)
  fejer,     ///< prod_d (1 - eps |k_d| / pi)_+
};

/// Fourier symbol of the mollifier at scale eps.
double mollifier_symbol(MollifierKind kind, double eps, double kx, double ky, double kz);
const char* mollifier_name(MollifierKind kind);
/// Throws ConfigError for an unknown name.
MollifierKind parse_mollifier(const std::string& name);

/// Physical samples of a vector field, one array per component.
struct PhysicalVector {
  std::array<std::vector<double>, 3> c;
};

/// Physical samples of a 3x3 tensor, entry (i,j) at index 3*i + j.
struct PhysicalTensor {
  std::array<std::vector<double>, 9> c;
  const std::vector<double>& operator()(int i, int j) const { return c[3 * i + j]; }
  std::vector<double>& operator()(int i, int j) { return c[3 * i + j]; }
};

PhysicalVector to_physical(const VectorField& u);
/// G(i,j) = d_j u_i sampled on the grid.
PhysicalTensor gradient_physical(const VectorField& u);
/// Transforms back and zeroes every mode outside the retained band.
VectorField from_physical_dealiased(const GridPtr& grid, const PhysicalVector& p);

ScalarField dealias(ScalarField f);
VectorField dealias(VectorField u);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
ScalarField laplacian(const ScalarField& f);

/// Leray projection P: symbol delta_ij - k_i k_j / |k|^2, mode 0 untouched.
VectorField leray_project(const VectorField& f);
/// (I - P) f, the gradient part of f. Mode 0 is dropped.
VectorField gradient_part(const VectorField& f);

/// Same trigonometric polynomial on another grid: zero-padded when refining,
/// truncated when coarsening. Nyquist modes of either grid are dropped.
ScalarField resample(const ScalarField& f, const GridPtr& target);
VectorField resample(const VectorField& u, const GridPtr& target);

VectorField mollify(const VectorField& f, double epsilon,
                    MollifierKind kind = MollifierKind::gaussian);

/// (u.grad) w, formed in physical space and truncated by the 2/3 rule.
VectorField advect(const VectorField& u, const VectorField& w);

/// T_ij = u_i w_j (dealiased).
TensorField outer(const VectorField& u, const VectorField& w);
/// (div T)_i = d_j T_ji, so div(outer(u,w))_i = d_j(u_j w_i).
VectorField tensor_divergence(const TensorField& t);

/// Divergence-free random field with |u(k)| ~ amplitude |k|^-decay inside
/// the retained band and a zero mean. Deterministic for a given seed.
VectorField random_divfree_field(const GridPtr& grid, std::uint64_t seed, double amplitude,
                                 double decay);
/// Description of the generator behind random_divfree_field, recorded in
/// run metadata.
std::string_view random_field_algorithm();

}  // namespace l3mhd

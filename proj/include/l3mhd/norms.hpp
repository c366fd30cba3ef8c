#pragma once

#include <limits>
#include <span>

#include "l3mhd/field.hpp"

namespace l3mhd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Lp norm by collocation quadrature (cell weight (L/n)^3); p = kInf is the
/// grid maximum. Vector fields use the pointwise Euclidean magnitude.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& u, double p);
/// Lp norm of already-sampled nonnegative magnitudes.
double lp_norm_samples(std::span<const double> magnitudes, double cell_volume, double p);

/// L2 norm from the spectral coefficients (Parseval).
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& u);

/// Homogeneous |k|^s seminorm with mode 0 dropped, except s = -3/2 which is
/// the inhomogeneous (1+|k|^2)^(-3/4) norm.
double sobolev_seminorm(const VectorField& u, double s);
double sobolev_seminorm(const ScalarField& f, double s);

/// Composite trapezoid rule on uniform nodes.
double trapezoid(std::span<const double> values, double dt);

/// L^l in time of per-node values (trapezoid), l = kInf is the maximum.
/// Throws EmptyTrajectory on an empty series.
double mixed_norm_series(std::span<const double> per_node, double dt, double l);
/// L^l(0,T; L^s) of a sampled trajectory.
double mixed_norm(std::span<const VectorField> nodes, double dt, double l, double s);

}  // namespace l3mhd

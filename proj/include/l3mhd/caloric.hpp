#pragma once

#include <cstddef>
#include <vector>

#include "l3mhd/field.hpp"

namespace l3mhd {

/// Uniform time nodes t_m = t0 + m dt, m = 0 .. count-1.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t count = 0;

  double time(std::size_t m) const { return t0 + static_cast<double>(m) * dt; }
  double horizon() const { return count == 0 ? t0 : time(count - 1); }
  std::size_t steps() const { return count == 0 ? 0 : count - 1; }
};

/// Nodes covering [0, horizon]; horizon must be a whole number of steps.
TimeGrid make_time_grid(double horizon, double dt, double t0 = 0.0);
TimeGrid make_time_grid_steps(std::size_t steps, double dt, double t0 = 0.0);
bool same_nodes(const TimeGrid& a, const TimeGrid& b);

/// e^{t Laplacian} f. Throws NegativeTime for t < 0.
VectorField heat_flow(const VectorField& f, double t);

/// Caloric extension (v1, H1)(t_m) = e^{t_m Laplacian}(v0, h0); time is measured
/// from nodes.t0.
struct CaloricPair {
  TimeGrid nodes;
  VectorField v0, h0;
  std::vector<VectorField> v1, h1;
};

CaloricPair caloric_pair(const VectorField& v0, const VectorField& h0, const TimeGrid& nodes);

/// True when ||v1(t)||_p and ||H1(t)||_p are non-increasing over the nodes for
/// p in {2, 3, 4, 5} (relative slack `slack`).
bool caloric_lp_monotone(const CaloricPair& cal, double slack = 1e-12);

/// Samples g(t_m) of a forcing on uniform nodes.
struct ForcedTrajectory {
  TimeGrid nodes;
  std::vector<VectorField> g;
};

/// U(t) = int_0^t e^{(t-s)Laplacian} P g(s) ds with g linear between nodes.
///
/// Computed by U_{m+1} = e^{-|k|^2 dt} U_m + w0 P g_m + w1 P g_{m+1}, where
/// the weights integrate the exponential exactly against the two hat
/// functions of the step. U_0 = 0. Throws EmptyTrajectory.
std::vector<VectorField> duhamel(const ForcedTrajectory& f);

/// Per-mode weights of one Duhamel step: decay e^{-z}, and the integrals of
/// e^{-(dt-s) lambda} against (1 - s/dt) and s/dt, for z = lambda dt.
struct DuhamelWeights {
  double decay;
  double w0;
  double w1;
};
DuhamelWeights duhamel_weights(double lambda, double dt);

struct StokesSolution {
  std::vector<VectorField> u;
  std::vector<VectorField> grad_p;
  /// (||d_t u|| + ||grad^2 u|| + ||grad p||) / ||f|| in L^l(0,T; L^s); 0 for f = 0.
  double regularity_ratio = 0.0;
};

/// Forced Stokes system with zero initial data: u = duhamel(f),
/// grad p = (I - P) f. d_t u uses centered differences inside and one-sided
/// differences at the ends.
StokesSolution stokes_solve(const ForcedTrajectory& f, double l, double s);

/// ||grad^2 u||_{L^s}: pointwise Frobenius norm of the Hessian.
double hessian_lp_norm(const VectorField& u, double s);

}  // namespace l3mhd

#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "l3mhd/caloric.hpp"
#include "l3mhd/fixed_point.hpp"
#include "l3mhd/spectral.hpp"

namespace l3mhd {

enum class WindowPolicy { automatic, fixed };

struct SchemeParams {
  double epsilon = 0.5;
  double horizon = 0.25;
  double dt = 1.0 / 256;
  double picard_tol = 1e-12;
  std::size_t max_picard_iters = 200;
  WindowPolicy window_policy = WindowPolicy::automatic;
  /// Window length for WindowPolicy::fixed.
  double window_length = 0.0;
  MollifierKind mollifier = MollifierKind::gaussian;

  /// Throws ConfigError.
  void validate() const;
  std::size_t steps(double span) const;
};

/// A (v, H) pair of trajectories on shared nodes.
struct FieldPath {
  std::vector<VectorField> v, h;

  std::size_t size() const { return v.size(); }
};

FieldPath operator+(FieldPath a, const FieldPath& b);
FieldPath operator-(FieldPath a, const FieldPath& b);
FieldPath zero_path(const GridPtr& grid, std::size_t count);

/// max_t ||u||_2 + (int ||grad u||_2^2 dt)^(1/2), trapezoid in time.
double xt_norm(const std::vector<VectorField>& u, double dt);
/// xt_norm(v) + xt_norm(H).
double xt_norm(const FieldPath& p, double dt);

struct MhdState {
  VectorField v2, h2;
  double t = 0.0;
};

/// Physical samples of the caloric pair and its gradients, per node.
struct CaloricCache {
  std::vector<PhysicalVector> v, h;
  std::vector<PhysicalTensor> gv, gh;
};

/// Everything the mild-form operators of one window need.
class SchemeContext {
 public:
  SchemeContext(CaloricPair cal, SchemeParams params);

  const CaloricPair& caloric() const { return cal_; }
  const SchemeParams& params() const { return params_; }
  const GridPtr& grid() const { return cal_.v0.grid_ptr(); }
  const TimeGrid& nodes() const { return cal_.nodes; }
  const CaloricCache& cache() const { return *cache_; }

 private:
  CaloricPair cal_;
  SchemeParams params_;
  std::shared_ptr<const CaloricCache> cache_;
};

/// R: Duhamel of -P(v1.grad v1 - H1.grad H1) and -P(v1.grad H1 - H1.grad v1).
FieldPath assemble_source(const SchemeContext& ctx);
FieldPath assemble_source(const CaloricPair& cal);

/// B(a,b): Duhamel of -P[(eta*a.v).grad b.v - (eta*a.H).grad b.H] and
/// -P[(eta*a.v).grad b.H - (eta*a.H).grad b.v].
FieldPath bilinear_apply(const SchemeContext& ctx, const FieldPath& a, const FieldPath& b);

/// L(a): Duhamel of the cross terms with the caloric pair.
FieldPath linear_apply(const SchemeContext& ctx, const FieldPath& a);

/// Combined nonlinearity of the mollified system at node m, dealiased and
/// not projected: (eta*v2).grad v2 - (eta*H2).grad H2 + cross + caloric terms
/// for v, likewise for H.
std::pair<VectorField, VectorField> nonlinearity(const SchemeContext& ctx, const FieldPath& u,
                                                 std::size_t m);

struct SchemeConstants {
  double c1 = 0.0, c2 = 0.0, r_norm = 0.0;
  double duhamel_constant = 0.0;      ///< discrete Duhamel bound C_d
  double mollifier_constant = 0.0;    ///< C_eta, c1 = C_d C_eta sqrt(T) eps^(-3/2)
  double interpolation_constant = 0.0;
  double l5_v1 = 0.0, l5_h1 = 0.0;    ///< L5L5 of the caloric pair
};

inline constexpr double kDuhamelConstant = 2.1;

/// sup over 0 < e <= L of e^{3/2} L^{-3/2} (sum over retained k != 0 of eta(e k)^2)^{1/2}.
double mollifier_constant(const Grid& grid, MollifierKind kind);
/// L^{-3/2} (sum over retained k != 0 of eta(eps k)^2)^{1/2}: the sup of |eta*f| per
/// unit ||f||_2 for mean-free f.
double mollifier_sup_factor(const Grid& grid, double epsilon, MollifierKind kind);

SchemeConstants estimate_constants(const SchemeContext& ctx, const FieldPath& source);
SchemeConstants estimate_constants(const CaloricPair& cal, const SchemeParams& params);

QuadraticProblem<FieldPath> make_problem(const SchemeContext& ctx, const FieldPath& source,
                                         const SchemeConstants& k);

/// Random trajectories used to test the constants against the maps.
std::vector<FieldPath> constant_probes(const GridPtr& grid, std::size_t count, std::size_t probes);

struct Window {
  std::shared_ptr<const SchemeContext> ctx;
  FieldPath pert;
  FixedPointCertificate cert;
  SchemeConstants constants;
  /// Window steps tried before this one was accepted (halving log).
  std::vector<std::size_t> rejected_steps;

  const CaloricPair& cal() const { return ctx->caloric(); }
  const TimeGrid& nodes() const { return ctx->nodes(); }
  VectorField total_v(std::size_t m) const { return cal().v1[m] + pert.v[m]; }
  VectorField total_h(std::size_t m) const { return cal().h1[m] + pert.h[m]; }
};

struct Trajectory {
  SchemeParams params;
  std::vector<Window> windows;

  double t0() const;
  double horizon() const;
  const GridPtr& grid() const;
  const VectorField& v0() const { return windows.front().cal().v0; }
  const VectorField& h0() const { return windows.front().cal().h0; }
  /// Number of stored nodes over all windows (seams counted twice).
  std::size_t node_count() const;
};

/// One window from (v0, h0) at time t0, at most `max_steps` long. The window
/// is halved until the contraction condition holds.
Window solve_window(const VectorField& v0, const VectorField& h0, const SchemeParams& params,
                    double t0, std::size_t max_steps);
/// First window on [0, horizon] (possibly shortened).
Trajectory solve_window(const VectorField& v0, const VectorField& h0, const SchemeParams& params);
/// Continues with fresh splittings from the total field until new_horizon.
Trajectory extend(Trajectory traj, double new_horizon);
/// solve_window followed by extend to params.horizon.
Trajectory solve(const VectorField& v0, const VectorField& h0, const SchemeParams& params);

/// Pi with -Lap Pi = div div N, N = v x v - H x H of the total fields. Mode 0 is zero.
ScalarField recover_pressure(const VectorField& v2, const VectorField& h2, const VectorField& v1,
                             const VectorField& h1);
ScalarField recover_pressure(const MhdState& state, const CaloricPair& cal, std::size_t m);
/// max |k^2 Pi(k) + k_i k_j N_ij(k)| / max |k_i k_j N_ij(k)|.
double pressure_poisson_residual(const ScalarField& pi, const VectorField& v, const VectorField& h);

struct PressureDecomposition {
  TimeGrid nodes;
  std::array<std::vector<ScalarField>, 4> parts;
  std::array<std::vector<VectorField>, 4> grads;
  std::vector<ScalarField> total;
  std::array<double, 4> regularity{};
  std::array<std::pair<double, double>, 4> exponents{};
  /// ||grad Pi - sum grad Pi^i|| / ||grad Pi|| in L^{3/2} L^{9/8}.
  double gradient_mismatch = 0.0;
};

/// Pressure scalar whose gradient is (I - P) f: p(k) = -i k.f(k) / |k|^2.
ScalarField pressure_from_forcing(const VectorField& f);
PressureDecomposition pressure_decompose(const Trajectory& traj, std::size_t window = 0);

/// Max over steps of || dv2/dt - Lap(mid) + P N(mid) ||_2 (and the H analogue):
/// the discrete residual of the perturbation equation at step midpoints.
double momentum_residual(const Window& w);
/// (int ||d_t v2||^2_{H^{-3/2}} + ||d_t H2||^2_{H^{-3/2}})^{1/2} with forward differences.
double time_derivative_dual_norm(const Window& w);

}  // namespace l3mhd

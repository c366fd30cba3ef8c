#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "l3mhd/scheme.hpp"

namespace l3mhd {

/// Node of a trajectory; seams are listed once (end of the earlier window).
struct NodeRef {
  std::size_t window = 0;
  std::size_t m = 0;
  double t = 0.0;
};
std::vector<NodeRef> unique_nodes(const Trajectory& traj);

/// v - e^{t Lap} v0 and H - e^{t Lap} h0 over unique_nodes, the perturbation of
/// the single splitting from t = 0. For one window this is the stored pair.
FieldPath global_perturbation(const Trajectory& traj);

enum class EnergyKind { global, local };

struct EnergyRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  ///< rhs - lhs
};

/// Per-node quantities behind the global audit.
struct GlobalNode {
  double t = 0.0;
  std::size_t window = 0;
  double e_v2 = 0.0, e_h2 = 0.0;        ///< 1/2 ||.||_2^2
  double diss_v2 = 0.0, diss_h2 = 0.0;  ///< ||grad .||_2^2
  double cross = 0.0;                   ///< integrand of the right side
  double l3_v = 0.0, l3_h = 0.0;        ///< total fields
  std::size_t picard_iters = 0;
};

struct EnergyReport {
  EnergyKind kind = EnergyKind::global;
  std::string test_function;
  std::vector<EnergyRow> rows;
  std::vector<GlobalNode> nodes;  ///< global kind only
  /// (E_{m+1} - E_m)/dt + mean(D) - mean(C) per step (global), or the
  /// analogous per-step residual rate of the local balance.
  std::vector<double> step_residuals;
  /// max |f_{m+1} - 2 f_m + f_{m-1}| over the rate series f.
  double step_aggregate = 0.0;
  /// sum |f_{m+1} - 2 f_m + f_{m-1}| dt.
  double aggregate = 0.0;
  double tolerance = 0.0;
  double min_residual = 0.0;
  double max_abs_residual = 0.0;
  double max_step_residual = 0.0;
  bool pass = true;
};

/// tolerance = 10 (aggregate + 1e-12) unless `tolerance` >= 0 is given.
EnergyReport global_energy_audit(const Trajectory& traj, double tolerance = -1.0);

/// Test function phi(x, t) = theta(t) * prod_d s(x_d).
struct TestFunction {
  enum class Space {
    constant,          ///< s = 1
    periodic_quartic,  ///< s = (1 - sin^2((x - c)/2))^2 = cos^4((x - c)/2)
    quartic,           ///< s = (1 - ((x - c)/r)^2)^2 on |x - c| < r
  };
  Space space = Space::periodic_quartic;
  std::array<double, 3> center{};
  double radius = 0.0;
  /// Quartic time bump on [t_start, t_end].
  double t_start = 0.0;
  double t_end = 0.0;

  double time_value(double t) const;
  double time_derivative(double t) const;
  std::string describe() const;
};

/// Bump centred in the box, time support [t0 + len/8, t0 + 7 len/8] on nodes of
/// window `window`.
TestFunction preset_test_function(const Trajectory& traj, std::size_t window = 0,
                                  TestFunction::Space space = TestFunction::Space::periodic_quartic);

/// Both sides of the localized energy balance of the perturbation, evaluated
/// on a 3/2-padded grid. Throws UnsupportedTestFunction unless the time
/// support lies strictly inside one window.
EnergyReport local_energy_audit(const Trajectory& traj, const TestFunction& phi,
                                double tolerance = -1.0);

struct AprioriRow {
  double horizon = 0.0;
  double energy_ratio = 0.0;  ///< sup (||v2||^2 + ||H2||^2) / T^{3/2}
  double xt_ratio = 0.0;      ///< (||.||_{LinfL2} + ||grad .||_{L2L2}) / T^{3/4}
};
struct AprioriReport {
  std::vector<AprioriRow> rows;
  double energy_spread = 0.0;  ///< max/min over horizons
  double xt_spread = 0.0;
  bool pass = true;
};
/// Horizons T/4, T/2, T by default (rounded to nodes).
AprioriReport apriori_audit(const Trajectory& traj, std::vector<double> horizons = {});

struct CaloricBoundsReport {
  double l3_data = 0.0;    ///< ||v0||_3 + ||h0||_3
  double linf_l3 = 0.0;    ///< sum over the pair
  double l5_l5 = 0.0;
  double l8_l4 = 0.0;
  double attainment = 0.0;        ///< ||v1(dt) - v0||_3 + ||H1(dt) - h0||_3
  double attainment_bound = 0.0;  ///< dt (||Lap v0||_3 + ||Lap h0||_3)
  bool linf_contraction = true;
  bool l5_within = true;
  bool l8_within = true;
  bool pass = true;
};
CaloricBoundsReport caloric_bounds_audit(const CaloricPair& cal);

struct NonlinearRow {
  double l = 0.0, s = 0.0;
  double ratio_v = 0.0, ratio_h = 0.0;
  double constant = 0.0;  ///< fitted bound, 0 when the pair is not calibrated
  bool pass = true;
};
struct NonlinearReport {
  std::vector<NonlinearRow> rows;
  bool pass = true;
};
std::vector<std::pair<double, double>> default_nonlinear_pairs();
/// ||u.grad u||_{L^l L^s} / (||u||_{LinfL2} + ||grad u||_{L2L2})^2 for u in
/// {v2, H2}. Throws ScalingViolation unless 3/s + 2/l = 4.
NonlinearReport nonlinear_norm_audit(const Trajectory& traj,
                                     std::vector<std::pair<double, double>> pairs = {});

struct OscillationRow {
  int part = 0;
  double radius = 0.0;
  double lhs = 0.0;  ///< sum over sub-boxes
  double rhs = 0.0;  ///< sum over sub-boxes, without C
  double ratio = 0.0;
  double max_box_ratio = 0.0;
  double constant = 0.0;
  bool pass = true;
};
struct OscillationReport {
  std::vector<OscillationRow> rows;
  bool pass = true;
};

/// R-power, inner exponent q and outer exponent of the right side, per part.
struct OscillationExponents {
  double r_power, q, outer;
};
const std::array<OscillationExponents, 4>& oscillation_exponents();

/// Mean oscillation of each Pi^i over tiled sub-boxes of side 2R against
/// R^a int (int_Q |grad Pi^i|^q)^b. R must tile the box on grid points.
OscillationReport oscillation_audit(const PressureDecomposition& d, double radius);
OscillationReport oscillation_audit(const PressureDecomposition& d, std::vector<double> radii = {});

struct SweepRow {
  double epsilon = 0.0;
  double distance = 0.0;  ///< to the next level; 0 for the last
};
struct SweepReport {
  std::vector<SweepRow> rows;
  bool pass = true;
};
/// L2(0,T; L2) distance between pairs of trajectories on shared nodes.
double path_distance(const FieldPath& a, const FieldPath& b, double dt);
SweepReport epsilon_sweep(const VectorField& v0, const VectorField& h0, const SchemeParams& params,
                          std::vector<double> levels = {});

/// Norm table over unique nodes for v1, H1, v2, H2 with tags L2, L3, L4, L5,
/// L10/3, H1, H-1, H-3/2 (homogeneous seminorms for the Sobolev tags).
struct NormLedger {
  static constexpr std::array<const char*, 4> fields{"v1", "H1", "v2", "H2"};
  static constexpr std::array<const char*, 8> tags{"L2", "L3", "L4", "L5", "L10/3", "H1", "H-1", "H-3/2"};
  std::vector<double> t;
  /// values[node][field][tag]
  std::vector<std::array<std::array<double, 8>, 4>> values;
  /// L^l L^p aggregates for each field: L5L5, L8L4, LinfL2, L2H1, L10/3L10/3.
  std::array<std::array<double, 5>, 4> mixed{};
};
NormLedger norm_ledger(const Trajectory& traj);

struct AuditFit {
  std::array<double, 3> nonlinear{};
  std::array<double, 4> oscillation{};
};
/// Raw maxima (no margin) of the nonlinear and oscillation ratios over the
/// calibration corpus: five seeded random runs, amplitude 0.01, decay 2,
/// T = 0.25, dt = 1/64, eps = 0.5.
AuditFit fit_audit_constants(const GridPtr& grid);

}  // namespace l3mhd

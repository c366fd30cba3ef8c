#pragma once

#include <cstdint>
#include <vector>

#include "l3mhd/scheme.hpp"

namespace l3mhd {

struct GronwallBound {
  std::vector<double> a_form;  ///< e^{int phi} (eta0 + int psi)
  std::vector<double> b_form;  ///< a(t) e^{int phi} with a(t) = eta0 + int psi
};

/// Cumulative trapezoid integrals on uniform nodes. Throws NegativeWeight if
/// phi or psi has a negative sample, NodeMismatch if their lengths differ.
GronwallBound gronwall_bound(double eta0, const std::vector<double>& phi, const std::vector<double>& psi,
                             double dt);

struct StabilityRow {
  double t = 0.0;
  double d = 0.0;            ///< ||omega||^2 + ||psi||^2
  double dissipation = 0.0;  ///< ||grad omega||^2 + ||grad psi||^2
  double g1 = 0.0, g2 = 0.0;  ///< int |v1|^5, int |H1|^5 of the caloric extension
  double envelope = 0.0;     ///< D(0) exp(C G(t))
};

struct StabilityReport {
  std::vector<StabilityRow> rows;
  double c_hat = 0.0;  ///< least-squares rate of log(D/D(0)) against G = int (g1 + g2)
  double k = 0.0;      ///< max D / envelope
  double sup_d = 0.0;
  double delta = 0.0;
};

/// Difference of the total fields of two runs on the same grid and nodes;
/// the weights come from the caloric extension of `a`'s data.
StabilityReport difference_energy(const Trajectory& a, const Trajectory& b);

struct StabilityVerdict {
  std::vector<StabilityReport> reports;  ///< one per delta
  double identical_max = 0.0;             ///< max D of two identical baseline runs
  double c_spread = 1.0;                  ///< max/min of c_hat across deltas
  double scaling_error = 1.0;             ///< worst factor between sup D ratios and delta^2 ratios
  bool pass = true;
};

/// Solenoidal field with unit L3 norm added to v0, scaled by delta.
VectorField stability_perturbation(const GridPtr& grid, std::uint64_t seed);

/// Baseline and one perturbed solve per delta (v0 + delta * perturbation).
/// PASS iff identical runs agree exactly, every K <= 10, c_hat agrees within
/// a factor 2 across deltas and sup D tracks delta^2 within a factor 2.
/// Independent solves run on up to `jobs` threads.
StabilityVerdict stability_experiment(const VectorField& v0, const VectorField& h0, const SchemeParams& params,
                                      const std::vector<double>& deltas, std::uint64_t seed = 7,
                                      unsigned jobs = 1);

struct SmallnessRow {
  double t1 = 0.0;
  double sup_v = 0.0;  ///< sup_{t <= t1} ||v(t) - v0||_3
  double sup_h = 0.0;
};
std::vector<SmallnessRow> smallness_window(const Trajectory& traj);

}  // namespace l3mhd

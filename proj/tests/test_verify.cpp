#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "l3mhd/errors.hpp"
#include "l3mhd/norms.hpp"
#include "l3mhd/presets.hpp"
#include "l3mhd/verify.hpp"

using namespace l3mhd;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory run(Preset preset, double amp, double horizon, double dt, int n = 16) {
  const auto grid = make_grid(n, 2 * kPi);
  InitialSpec spec;
  spec.preset = preset;
  spec.amplitude = amp;
  spec.seed = 3;
  const auto [v0, h0] = initial_data(grid, spec);
  SchemeParams p;
  p.epsilon = 0.5;
  p.horizon = horizon;
  p.dt = dt;
  p.picard_tol = 1e-12;
  return solve(v0, h0, p);
}

const Trajectory& tg64() {
  static const Trajectory t = run(Preset::taylor_green, 0.1, 0.25, 1.0 / 64);
  return t;
}
const Trajectory& tg128() {
  static const Trajectory t = run(Preset::taylor_green, 0.1, 0.25, 1.0 / 128);
  return t;
}
const Trajectory& split() {
  static const Trajectory t = run(Preset::random, 0.01, 0.25, 1.0 / 64);
  return t;
}

}  // namespace

TEST(UniqueNodes, SeamsOnce) {
  const auto& t = split();
  ASSERT_GE(t.windows.size(), 2u);
  const auto nodes = unique_nodes(t);
  EXPECT_EQ(nodes.size(), 17u);
  for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_NEAR(nodes[i].t, i / 64.0, 1e-14);
  const FieldPath g = global_perturbation(t);
  EXPECT_EQ(g.size(), nodes.size());
  EXPECT_EQ(l2_norm(g.v[0]), 0.0);
}

TEST(GlobalPerturbation, MatchesStoredForOneWindow) {
  const auto& t = tg64();
  ASSERT_EQ(t.windows.size(), 1u);
  const FieldPath g = global_perturbation(t);
  for (std::size_t m = 0; m < g.size(); m += 4) EXPECT_LT(l2_norm(g.v[m] - t.windows[0].pert.v[m]), 1e-15);
}

TEST(GlobalEnergy, PassesAndConverges) {
  const auto a = global_energy_audit(tg64());
  const auto b = global_energy_audit(tg128());
  EXPECT_TRUE(a.pass);
  EXPECT_TRUE(b.pass);
  EXPECT_EQ(a.rows.size(), 17u);
  EXPECT_EQ(a.rows.front().lhs, a.nodes.front().e_v2 + a.nodes.front().e_h2);
  EXPECT_GT(a.max_abs_residual / b.max_abs_residual, 3.5);
  EXPECT_GT(a.max_step_residual / b.max_step_residual, 3.5);
  EXPECT_LT(a.max_abs_residual, 1e-2 * a.rows.back().lhs);
}

TEST(GlobalEnergy, SplitTrajectory) {
  const auto r = global_energy_audit(split());
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.rows.size(), split().node_count());
  EXPECT_EQ(r.nodes.back().window, split().windows.size() - 1);
}

TEST(GlobalEnergy, ExplicitToleranceFails) {
  const auto r = global_energy_audit(tg64(), 0.0);
  EXPECT_EQ(r.tolerance, 0.0);
  EXPECT_EQ(r.pass, r.min_residual >= 0.0);
}

TEST(LocalEnergy, ConstantProfileIsTwiceWindowedGlobal) {
  const auto& t = tg64();
  const auto phi = preset_test_function(t, 0, TestFunction::Space::constant);
  const auto loc = local_energy_audit(t, phi);
  const auto glob = global_energy_audit(t);
  const double dt = t.params.dt;
  double diss = 0.0, rhs = 0.0;
  double prev_d = 0.0, prev_r = 0.0;
  for (std::size_t m = 0; m < glob.nodes.size(); ++m) {
    const auto& n = glob.nodes[m];
    const double th = phi.time_value(n.t), dth = phi.time_derivative(n.t);
    const double e = n.e_v2 + n.e_h2;
    const double d = th * (n.diss_v2 + n.diss_h2);
    const double r = dth * e + th * n.cross;
    if (m > 0) {
      diss += 0.5 * dt * (prev_d + d);
      rhs += 0.5 * dt * (prev_r + r);
    }
    prev_d = d;
    prev_r = r;
    const double scale = std::abs(loc.rows[m].lhs) + 1e-12;
    EXPECT_NEAR(loc.rows[m].lhs, 2 * (th * e + diss), 1e-9 * scale);
    EXPECT_NEAR(loc.rows[m].rhs, 2 * rhs, 1e-9 * scale);
  }
}

TEST(LocalEnergy, PeriodicQuarticConverges) {
  const auto a = local_energy_audit(tg64(), preset_test_function(tg64()));
  const auto b = local_energy_audit(tg128(), preset_test_function(tg128()));
  EXPECT_TRUE(a.pass);
  EXPECT_TRUE(b.pass);
  EXPECT_GT(a.max_abs_residual / b.max_abs_residual, 3.5);
  EXPECT_EQ(a.rows.front().lhs, 0.0);
  EXPECT_GT(a.rows[8].lhs, 0.0);
}

TEST(LocalEnergy, CompactQuarticPasses) {
  auto phi = preset_test_function(tg64(), 0, TestFunction::Space::quartic);
  phi.center = {1.0, 2.0, 5.5};
  EXPECT_TRUE(local_energy_audit(tg64(), phi).pass);
}

TEST(LocalEnergy, RejectsBadSupport) {
  const auto& t = tg64();
  auto phi = preset_test_function(t);
  phi.t_start = 0.0;
  EXPECT_THROW(local_energy_audit(t, phi), UnsupportedTestFunction);
  phi = preset_test_function(t);
  phi.t_end = t.horizon();
  EXPECT_THROW(local_energy_audit(t, phi), UnsupportedTestFunction);
  phi = preset_test_function(t);
  phi.t_end = phi.t_start;
  EXPECT_THROW(local_energy_audit(t, phi), UnsupportedTestFunction);
  phi = preset_test_function(t, 0, TestFunction::Space::quartic);
  phi.radius = 0.0;
  EXPECT_THROW(local_energy_audit(t, phi), UnsupportedTestFunction);

  const auto& s = split();
  phi = preset_test_function(s);
  phi.t_end = s.windows[1].nodes().time(2);
  EXPECT_THROW(local_energy_audit(s, phi), UnsupportedTestFunction);
  EXPECT_THROW(preset_test_function(s, 7), UnsupportedTestFunction);
}

TEST(TestFunction, TimeBump) {
  TestFunction f;
  f.t_start = 1.0;
  f.t_end = 3.0;
  EXPECT_EQ(f.time_value(2.0), 1.0);
  EXPECT_EQ(f.time_value(0.5), 0.0);
  EXPECT_EQ(f.time_derivative(2.0), 0.0);
  const double h = 1e-6;
  EXPECT_NEAR(f.time_derivative(1.4), (f.time_value(1.4 + h) - f.time_value(1.4 - h)) / (2 * h), 1e-7);
}

TEST(Apriori, RatioTable) {
  const auto& t = tg64();
  const auto r = apriori_audit(t);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_NEAR(r.rows[0].horizon, 0.0625, 1e-14);
  const FieldPath g = global_perturbation(t);
  double sup = 0.0;
  for (std::size_t m = 0; m <= 8; ++m)
    sup = std::max(sup, std::pow(l2_norm(g.v[m]), 2) + std::pow(l2_norm(g.h[m]), 2));
  EXPECT_NEAR(r.rows[1].energy_ratio, sup / std::pow(0.125, 1.5), 1e-12 * r.rows[1].energy_ratio);
  double lo = 1e300, hi = 0.0;
  for (const auto& row : r.rows) {
    lo = std::min(lo, row.xt_ratio);
    hi = std::max(hi, row.xt_ratio);
  }
  EXPECT_DOUBLE_EQ(r.xt_spread, hi / lo);
  EXPECT_EQ(r.pass, r.energy_spread < 4.0 && r.xt_spread < 4.0);
  EXPECT_THROW(apriori_audit(t, {1e-4}), NodeMismatch);
}

TEST(Apriori, ZeroPerturbation) {
  const auto t = run(Preset::elsasser_aligned, 0.1, 0.125, 1.0 / 64);
  const auto r = apriori_audit(t);
  EXPECT_EQ(r.energy_spread, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(CaloricBounds, HoldForPresets) {
  for (const auto& t : {&tg64(), &split()}) {
    const auto r = caloric_bounds_audit(t->windows[0].cal());
    EXPECT_TRUE(r.linf_contraction);
    EXPECT_TRUE(r.l5_within);
    EXPECT_TRUE(r.l8_within);
    EXPECT_LE(r.attainment, r.attainment_bound);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.linf_l3, r.l3_data * (1 + 1e-9));
  }
}

TEST(Nonlinear, ScalingGuard) {
  EXPECT_THROW(nonlinear_norm_audit(tg64(), {{2.0, 2.0}}), ScalingViolation);
  EXPECT_THROW(nonlinear_norm_audit(tg64(), {{-2.0, 1.0}}), ScalingViolation);
  EXPECT_THROW(nonlinear_norm_audit(tg64(), {{1e300, 0.75}}), ScalingViolation);
  for (const auto& [l, s] : default_nonlinear_pairs()) EXPECT_NEAR(3 / s + 2 / l, 4.0, 1e-15);
}

TEST(Nonlinear, RatiosFinite) {
  const auto r = nonlinear_norm_audit(tg64());
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_GT(row.ratio_v, 0.0);
    EXPECT_TRUE(std::isfinite(row.ratio_h));
    EXPECT_TRUE(row.pass);
  }
  const auto custom = nonlinear_norm_audit(tg64(), {{4.0 / 3.0, 1.2}});
  EXPECT_EQ(custom.rows[0].constant, 0.0);
}

TEST(Oscillation, RadiusScalingOfLastPart) {
  const auto d = pressure_decompose(tg64());
  const auto a = oscillation_audit(d, kPi / 4);
  const auto b = oscillation_audit(d, kPi / 2);
  ASSERT_EQ(a.rows.size(), 4u);
  EXPECT_NEAR(b.rows[3].rhs / a.rows[3].rhs, std::pow(2.0, 1.5), 1e-10);
  for (const auto& row : a.rows) {
    EXPECT_GE(row.lhs, 0.0);
    EXPECT_GE(row.max_box_ratio, row.ratio * (1 - 1e-12));
  }
}

TEST(Oscillation, DefaultRadiiAndTiling) {
  const auto d = pressure_decompose(tg64());
  const auto r = oscillation_audit(d, std::vector<double>{});
  EXPECT_EQ(r.rows.size(), 12u);
  EXPECT_THROW(oscillation_audit(d, 1.0), InvalidGrid);
  EXPECT_THROW(oscillation_audit(d, 4 * kPi), InvalidGrid);
}

TEST(Sweep, PathDistance) {
  const FieldPath g = global_perturbation(tg64());
  EXPECT_EQ(path_distance(g, g, 1.0 / 64), 0.0);
  EXPECT_THROW(path_distance(g, global_perturbation(tg128()), 1.0 / 64), NodeMismatch);
}

TEST(Sweep, AlignedDataIsDegenerate) {
  const auto grid = make_grid(16, 2 * kPi);
  InitialSpec spec;
  spec.preset = Preset::elsasser_aligned;
  const auto [v0, h0] = initial_data(grid, spec);
  SchemeParams p;
  p.horizon = 0.125;
  p.dt = 1.0 / 64;
  const auto r = epsilon_sweep(v0, h0, p);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].distance, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Sweep, TaylorGreenDistancesShrink) {
  const auto grid = make_grid(16, 2 * kPi);
  InitialSpec spec;
  spec.amplitude = 0.1;
  const auto [v0, h0] = initial_data(grid, spec);
  SchemeParams p;
  p.horizon = 0.125;
  p.dt = 1.0 / 64;
  const auto r = epsilon_sweep(v0, h0, p);
  EXPECT_GT(r.rows[0].distance, 0.0);
  EXPECT_TRUE(r.pass) << r.rows[0].distance << " " << r.rows[1].distance;
}

TEST(NormLedger, FiniteAndConsistent) {
  const auto& t = tg64();
  const auto led = norm_ledger(t);
  ASSERT_EQ(led.values.size(), 17u);
  for (const auto& row : led.values)
    for (const auto& f : row)
      for (double x : f) {
        EXPECT_GE(x, 0.0);
        EXPECT_TRUE(std::isfinite(x));
      }
  EXPECT_EQ(led.values[0][2][0], 0.0);
  EXPECT_NEAR(led.values[0][0][1], lp_norm(t.v0(), 3.0), 1e-14);
  const auto cb = caloric_bounds_audit(t.windows[0].cal());
  EXPECT_NEAR(led.mixed[0][0] + led.mixed[1][0], cb.l5_l5, 1e-12 * cb.l5_l5);
}

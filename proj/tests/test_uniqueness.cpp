#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "l3mhd/errors.hpp"
#include "l3mhd/norms.hpp"
#include "l3mhd/presets.hpp"
#include "l3mhd/uniqueness.hpp"

using namespace l3mhd;

namespace {

constexpr double kPi = std::numbers::pi;

SchemeParams params() {
  SchemeParams p;
  p.horizon = 0.125;
  p.dt = 1.0 / 64;
  return p;
}

std::pair<VectorField, VectorField> data(Preset preset, double amp) {
  InitialSpec spec;
  spec.preset = preset;
  spec.amplitude = amp;
  spec.seed = 3;
  spec.decay = 2.0;
  return initial_data(make_grid(16, 2 * kPi), spec);
}

}  // namespace

TEST(Gronwall, ClosedForms) {
  const double dt = 1.0 / 1000;
  std::vector<double> zero(1001, 0.0), one(1001, 1.0), ramp(1001);
  for (std::size_t m = 0; m < ramp.size(); ++m) ramp[m] = m * dt;
  const auto flat = gronwall_bound(2.5, zero, zero, dt);
  for (double b : flat.a_form) EXPECT_EQ(b, 2.5);
  const auto expo = gronwall_bound(1.0, one, zero, dt);
  EXPECT_NEAR(expo.a_form.back(), std::exp(1.0), 1e-13);
  const auto gauss = gronwall_bound(3.0, ramp, zero, dt);
  for (std::size_t m = 0; m < ramp.size(); m += 100)
    EXPECT_NEAR(gauss.a_form[m], 3.0 * std::exp(0.5 * ramp[m] * ramp[m]), 1e-12);
  const auto forced = gronwall_bound(0.0, zero, one, dt);
  EXPECT_NEAR(forced.b_form.back(), 1.0, 1e-13);
}

TEST(Gronwall, Errors) {
  std::vector<double> a{0.0, -1.0}, b{0.0, 0.0};
  EXPECT_THROW(gronwall_bound(1.0, a, b, 0.1), NegativeWeight);
  EXPECT_THROW(gronwall_bound(1.0, b, a, 0.1), NegativeWeight);
  EXPECT_THROW(gronwall_bound(1.0, b, {0.0}, 0.1), NodeMismatch);
}

TEST(DifferenceEnergy, IdenticalRunsAreZero) {
  const auto [v0, h0] = data(Preset::random, 0.01);
  const auto a = solve(v0, h0, params()), b = solve(v0, h0, params());
  const auto r = difference_energy(a, b);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.d, 0.0);
    EXPECT_GE(row.g1, 0.0);
  }
  EXPECT_EQ(r.c_hat, 0.0);
  EXPECT_EQ(r.k, 0.0);
}

TEST(DifferenceEnergy, ZeroDataHasZeroWeights) {
  const auto g = make_grid(16, 2 * kPi);
  const VectorField z(g);
  const auto a = solve(z, z, params());
  for (const auto& row : difference_energy(a, a).rows) {
    EXPECT_EQ(row.g1, 0.0);
    EXPECT_EQ(row.g2, 0.0);
  }
}

TEST(DifferenceEnergy, InitialValueIsPerturbationSize) {
  const auto [v0, h0] = data(Preset::elsasser_aligned, 0.1);
  const VectorField p = 1e-4 * stability_perturbation(v0.grid_ptr(), 7);
  EXPECT_NEAR(lp_norm(p, 3.0), 1e-4, 1e-16);
  const auto a = solve(v0, h0, params()), b = solve(v0 + p, h0, params());
  const auto r = difference_energy(b, a);
  const double want = std::pow(l2_norm(p), 2);
  EXPECT_NEAR(r.rows.front().d, want, 1e-12 * want);
  EXPECT_LE(r.k, 10.0);
}

TEST(DifferenceEnergy, Mismatches) {
  const auto [v0, h0] = data(Preset::random, 0.01);
  const auto a = solve(v0, h0, params());
  auto p = params();
  p.dt = 1.0 / 128;
  EXPECT_THROW(difference_energy(a, solve(v0, h0, p)), NodeMismatch);
  InitialSpec spec;
  const auto [w0, k0] = initial_data(make_grid(8, 2 * kPi), spec);
  EXPECT_THROW(difference_energy(a, solve(w0, k0, params())), GridMismatch);
}

TEST(Stability, SmallRandomDataPasses) {
  const auto [v0, h0] = data(Preset::random, 0.01);
  const auto v = stability_experiment(v0, h0, params(), {1e-4, 1e-5}, 7, 2);
  EXPECT_EQ(v.identical_max, 0.0);
  ASSERT_EQ(v.reports.size(), 2u);
  for (const auto& r : v.reports) EXPECT_LE(r.k, 10.0);
  EXPECT_LE(v.c_spread, 2.0);
  EXPECT_LE(v.scaling_error, 2.0);
  EXPECT_TRUE(v.pass);
}

TEST(Stability, ZeroDeltaIsTrivial) {
  const auto [v0, h0] = data(Preset::random, 0.01);
  const auto v = stability_experiment(v0, h0, params(), {0.0});
  EXPECT_EQ(v.reports[0].sup_d, 0.0);
  EXPECT_TRUE(v.pass);
  EXPECT_THROW(stability_experiment(v0, h0, params(), {-1.0}), ConfigError);
}

TEST(Stability, JobsDoNotChangeResults) {
  const auto [v0, h0] = data(Preset::random, 0.01);
  const auto a = stability_experiment(v0, h0, params(), {1e-4}, 7, 1);
  const auto b = stability_experiment(v0, h0, params(), {1e-4}, 7, 3);
  for (std::size_t m = 0; m < a.reports[0].rows.size(); ++m) EXPECT_EQ(a.reports[0].rows[m].d, b.reports[0].rows[m].d);
}

TEST(Smallness, RunningSup) {
  const auto [v0, h0] = data(Preset::taylor_green, 0.1);
  const auto w = smallness_window(solve(v0, h0, params()));
  ASSERT_EQ(w.size(), 9u);
  EXPECT_EQ(w[0].sup_v, 0.0);
  EXPECT_EQ(w[0].sup_h, 0.0);
  for (std::size_t i = 1; i < w.size(); ++i) {
    EXPECT_GE(w[i].sup_v, w[i - 1].sup_v);
    EXPECT_GE(w[i].sup_h, w[i - 1].sup_h);
  }
  EXPECT_GT(w.back().sup_v, 0.0);
  const VectorField z(v0.grid_ptr());
  for (const auto& row : smallness_window(solve(z, z, params()))) EXPECT_EQ(row.sup_v + row.sup_h, 0.0);
}

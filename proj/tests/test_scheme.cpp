#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "l3mhd/errors.hpp"
#include "l3mhd/norms.hpp"
#include "l3mhd/presets.hpp"
#include "l3mhd/scheme.hpp"

using namespace l3mhd;

namespace {

constexpr double kPi = std::numbers::pi;

std::pair<VectorField, VectorField> data(Preset preset, double amp, int n = 16) {
  InitialSpec spec;
  spec.preset = preset;
  spec.amplitude = amp;
  spec.seed = 3;
  return initial_data(make_grid(n, 2 * kPi), spec);
}

SchemeParams params(double horizon, double dt) {
  SchemeParams p;
  p.horizon = horizon;
  p.dt = dt;
  return p;
}

const Trajectory& tg(double dt) {
  static std::map<double, Trajectory> cache;
  auto it = cache.find(dt);
  if (it == cache.end()) {
    const auto [v0, h0] = data(Preset::taylor_green, 0.1);
    it = cache.emplace(dt, solve(v0, h0, params(0.25, dt))).first;
  }
  return it->second;
}

FieldPath random_path(const GridPtr& g, std::size_t count, std::uint64_t seed, double amp) {
  FieldPath p;
  for (std::size_t m = 0; m < count; ++m) {
    p.v.push_back(random_divfree_field(g, seed + 2 * m, amp, 1.0));
    p.h.push_back(random_divfree_field(g, seed + 2 * m + 1, amp, 1.0));
  }
  return p;
}

double path_l2(const FieldPath& p) {
  double s = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) s += std::pow(l2_norm(p.v[m]), 2) + std::pow(l2_norm(p.h[m]), 2);
  return std::sqrt(s);
}

}  // namespace

TEST(SchemeParams, Validation) {
  SchemeParams p;
  EXPECT_NO_THROW(p.validate());
  p.epsilon = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = SchemeParams{};
  p.horizon = 0.1;
  p.dt = 0.03;
  EXPECT_THROW(p.validate(), ConfigError);
  p = SchemeParams{};
  p.window_policy = WindowPolicy::fixed;
  p.window_length = p.dt;
  EXPECT_THROW(p.validate(), ConfigError);
  p.window_length = 2.5 * p.dt;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Elsasser, ZeroFixedPoint) {
  const auto [v0, h0] = data(Preset::elsasser_aligned, 0.1);
  const auto t = solve(v0, h0, params(0.25, 1.0 / 256));
  ASSERT_EQ(t.windows.size(), 1u);
  const auto& w = t.windows[0];
  EXPECT_LE(xt_norm(w.pert, t.params.dt), 1e-11);
  EXPECT_LE(w.cert.iterations, 2u);
  EXPECT_EQ(w.constants.r_norm, 0.0);
  double pmax = 0.0;
  for (std::size_t m = 0; m < w.nodes().count; m += 16) pmax = std::max(pmax, l2_norm(recover_pressure({w.pert.v[m], w.pert.h[m], 0.0}, w.cal(), m)));
  EXPECT_LE(pmax, 1e-11);
}

TEST(Operators, BilinearIsBilinear) {
  const auto [v0, h0] = data(Preset::taylor_green, 0.1);
  const auto& ctx = *tg(1.0 / 64).windows[0].ctx;
  const auto g = ctx.grid();
  const std::size_t n = ctx.nodes().count;
  const FieldPath a = random_path(g, n, 10, 0.1), b = random_path(g, n, 200, 0.1), c = random_path(g, n, 400, 0.1);
  const FieldPath lhs = bilinear_apply(ctx, a + b, c);
  const FieldPath rhs = bilinear_apply(ctx, a, c) + bilinear_apply(ctx, b, c);
  EXPECT_LE(path_l2(lhs - rhs), 1e-12 * path_l2(lhs));
  const FieldPath r2 = bilinear_apply(ctx, c, a) + bilinear_apply(ctx, c, b);
  EXPECT_LE(path_l2(bilinear_apply(ctx, c, a + b) - r2), 1e-12 * path_l2(r2));
  const FieldPath l1 = linear_apply(ctx, a + b), l2 = linear_apply(ctx, a) + linear_apply(ctx, b);
  EXPECT_LE(path_l2(l1 - l2), 1e-12 * path_l2(l1));
  EXPECT_EQ(path_l2(bilinear_apply(ctx, zero_path(g, n), c)), 0.0);
}

TEST(Operators, OutputIsDivergenceFreeAndStartsAtZero) {
  const auto& w = tg(1.0 / 64).windows[0];
  const FieldPath r = assemble_source(*w.ctx);
  EXPECT_EQ(l2_norm(r.v[0]), 0.0);
  for (std::size_t m = 1; m < r.size(); m += 4) {
    for (const auto* f : {&r.v[m], &r.h[m]}) EXPECT_LE(l2_norm(divergence(*f)), 1e-13);
  }
  EXPECT_NEAR(xt_norm(r, 1.0 / 64), w.constants.r_norm, 1e-15);
}

TEST(Constants, EpsilonAndHorizonScaling) {
  const auto [v0, h0] = data(Preset::taylor_green, 0.1);
  const auto p = params(0.25, 1.0 / 64);
  auto q = p;
  q.epsilon = p.epsilon / 4;
  const auto cal = caloric_pair(v0, h0, make_time_grid(0.25, 1.0 / 64));
  const auto a = estimate_constants(cal, p), b = estimate_constants(cal, q);
  EXPECT_NEAR(b.c1 / a.c1, 8.0, 1e-12);
  EXPECT_EQ(a.r_norm, b.r_norm);
  EXPECT_EQ(a.c2, b.c2);
  const auto cal4 = caloric_pair(v0, h0, make_time_grid(1.0, 1.0 / 64));
  auto r = p;
  r.horizon = 1.0;
  EXPECT_NEAR(estimate_constants(cal4, r).c1 / a.c1, 2.0, 1e-12);
}

TEST(Constants, MollifierConstantDominatesSupFactor) {
  const auto g = make_grid(16, 2 * kPi);
  const double c = mollifier_constant(*g, MollifierKind::gaussian);
  EXPECT_GT(c, 0.0);
  for (double e : {0.01, 0.1, 0.5, 1.0, 3.0})
    EXPECT_LE(mollifier_sup_factor(*g, e, MollifierKind::gaussian) * std::pow(e, 1.5), c);
}

TEST(Certificate, IteratesStayInBall) {
  const auto& w = tg(1.0 / 64).windows[0];
  EXPECT_TRUE(w.cert.within_ball);
  EXPECT_LE(w.cert.max_iterate_norm, w.cert.x1 * (1 + 1e-12));
  EXPECT_LE(xt_norm(w.pert, 1.0 / 64), w.cert.x1 * (1 + 1e-12));
  EXPECT_LT(w.cert.gamma, 1.0);
  for (double r : w.cert.step_ratios()) EXPECT_LE(r, w.cert.gamma);
}

TEST(Windows, FixedPolicyAndSeams) {
  const auto [v0, h0] = data(Preset::taylor_green, 0.1);
  auto p = params(0.25, 1.0 / 64);
  p.window_policy = WindowPolicy::fixed;
  p.window_length = 0.125;
  const auto two = solve(v0, h0, p);
  ASSERT_EQ(two.windows.size(), 2u);
  const auto& a = two.windows[0];
  const auto& b = two.windows[1];
  EXPECT_EQ(b.nodes().t0, a.nodes().horizon());
  EXPECT_EQ(l2_norm(b.total_v(0) - a.total_v(a.nodes().count - 1)), 0.0);
  EXPECT_EQ(l2_norm(b.total_h(0) - a.total_h(a.nodes().count - 1)), 0.0);
  const auto& one = tg(1.0 / 64).windows[0];
  const VectorField diff = b.total_v(b.nodes().count - 1) - one.total_v(one.nodes().count - 1);
  EXPECT_LT(l2_norm(diff), 1e-3 * l2_norm(one.total_v(one.nodes().count - 1)));
  EXPECT_EQ(two.node_count(), 18u);
}

TEST(Windows, FixedPolicyCollapses) {
  const auto [v0, h0] = data(Preset::taylor_green, 2.0);
  auto p = params(0.25, 1.0 / 64);
  p.window_policy = WindowPolicy::fixed;
  p.window_length = 0.25;
  EXPECT_THROW(solve(v0, h0, p), WindowCollapse);
}

TEST(Windows, AutomaticHalves) {
  const auto [v0, h0] = data(Preset::taylor_green, 0.3);
  const auto t = solve(v0, h0, params(0.25, 1.0 / 64));
  EXPECT_GT(t.windows.size(), 1u);
  EXPECT_FALSE(t.windows[0].rejected_steps.empty());
  EXPECT_NEAR(t.horizon(), 0.25, 1e-14);
  for (const auto& w : t.windows) EXPECT_LT(w.constants.c2, 1.0);
}

TEST(Windows, ExtendContinues) {
  const auto [v0, h0] = data(Preset::taylor_green, 0.1);
  const auto first = solve(v0, h0, params(0.125, 1.0 / 64));
  const auto longer = extend(first, 0.25);
  EXPECT_NEAR(longer.horizon(), 0.25, 1e-14);
  EXPECT_EQ(l2_norm(longer.windows[0].pert.v.back() - first.windows[0].pert.v.back()), 0.0);
}

TEST(Pressure, PoissonAndDecomposition) {
  const auto& t = tg(1.0 / 64);
  const auto& w = t.windows[0];
  for (std::size_t m : {std::size_t{1}, std::size_t{8}, std::size_t{16}}) {
    const ScalarField pi = recover_pressure(w.pert.v[m], w.pert.h[m], w.cal().v1[m], w.cal().h1[m]);
    EXPECT_LE(pressure_poisson_residual(pi, w.total_v(m), w.total_h(m)), 1e-10);
  }
  const auto d = pressure_decompose(t);
  EXPECT_LE(d.gradient_mismatch, 1e-8);
  for (double r : d.regularity) EXPECT_TRUE(std::isfinite(r));
}

TEST(Pressure, SingleModeOracle) {
  const auto g = make_grid(16, 2 * kPi);
  VectorField f(g);
  ScalarField want(g);
  std::vector<double> phys(g->physical_size());
  const double h = 2 * kPi / 16;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k) phys[g->physical_index(i, j, k)] = std::cos(i * h) * std::sin(2 * k * h);
  want = ScalarField::from_physical(g, phys);
  const VectorField grad = gradient(want);
  const VectorField swirl = random_divfree_field(g, 5, 1.0, 1.0);
  const ScalarField p = pressure_from_forcing(grad + swirl);
  EXPECT_LE(l2_norm(p - want), 1e-13);
}

TEST(Momentum, ResidualIsSecondOrder) {
  const double a = momentum_residual(tg(1.0 / 64).windows[0]);
  const double b = momentum_residual(tg(1.0 / 128).windows[0]);
  EXPECT_GT(a, 0.0);
  EXPECT_GT(a / b, 3.5);
}

TEST(Momentum, DualNormStable) {
  const double a = time_derivative_dual_norm(tg(1.0 / 64).windows[0]);
  const double b = time_derivative_dual_norm(tg(1.0 / 128).windows[0]);
  EXPECT_GT(a, 0.0);
  EXPECT_LT(std::max(a / b, b / a), 2.0);
}

#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "l3mhd/caloric.hpp"
#include "l3mhd/errors.hpp"
#include "l3mhd/spectral.hpp"
#include "test_util.hpp"

using namespace l3mhd;
using namespace l3mhd::testing;

namespace {

// u = (sin(y+z), 0, 0) scaled: solenoidal, |k|^2 = 2
VectorField shear(const GridPtr& g, double a) {
  return sample(
      g, [a](double, double y, double z) { return a * std::sin(y + z); },
      [](double, double, double) { return 0.0; }, [](double, double, double) { return 0.0; });
}

ForcedTrajectory random_forcing(const GridPtr& g, std::size_t count, double dt, std::uint64_t seed,
                                bool solenoidal) {
  ForcedTrajectory f{make_time_grid_steps(count - 1, dt), {}};
  for (std::size_t m = 0; m < count; ++m) {
    VectorField u = random_divfree_field(g, seed + 17 * m, 1.0, 1.0);
    if (!solenoidal) u += gradient(random_divfree_field(g, seed + 1000 + m, 1.0, 2.0)[0]);
    f.g.push_back(std::move(u));
  }
  return f;
}

}  // namespace

TEST(HeatFlow, IdentityAndEigenfunction) {
  auto g = make_grid(16, kTwoPi);
  VectorField u = shear(g, 0.7);
  EXPECT_EQ(rel_diff(heat_flow(u, 0.0), u), 0.0);
  VectorField w = heat_flow(u, 0.3);
  EXPECT_LT(rel_diff(w, std::exp(-0.6) * u), 1e-14);
  EXPECT_THROW(heat_flow(u, -1e-3), NegativeTime);
}

TEST(HeatFlow, SemigroupLaw) {
  auto g = make_grid(16, kTwoPi);
  VectorField u = random_divfree_field(g, 5, 1.0, 1.0);
  VectorField a = heat_flow(heat_flow(u, 0.13), 0.29);
  VectorField b = heat_flow(u, 0.42);
  EXPECT_LT(l2_norm(a - b), 1e-13);
  EXPECT_TRUE(b.solenoidal());
}

TEST(Caloric, PairProperties) {
  auto g = make_grid(16, kTwoPi);
  const TimeGrid nodes = make_time_grid(0.5, 0.05);
  ASSERT_EQ(nodes.count, 11u);

  auto zero = caloric_pair(VectorField(g), VectorField(g), nodes);
  for (const auto& f : zero.v1) EXPECT_EQ(l2_norm(f), 0.0);

  VectorField v0 = random_divfree_field(g, 11, 1.0, 1.0);
  auto same = caloric_pair(v0, v0, nodes);
  for (std::size_t m = 0; m < nodes.count; ++m) EXPECT_EQ(l2_norm(same.v1[m] - same.h1[m]), 0.0);

  VectorField h0 = random_divfree_field(g, 12, 0.5, 1.5);
  auto cal = caloric_pair(v0, h0, nodes);
  const double l3 = lp_norm(v0, 3.0);
  for (const auto& f : cal.v1) EXPECT_LE(lp_norm(f, 3.0), l3 * (1 + 1e-12));
  EXPECT_TRUE(caloric_lp_monotone(cal));

  auto other = make_grid(8, kTwoPi);
  EXPECT_THROW(caloric_pair(v0, VectorField(other), nodes), GridMismatch);
}

TEST(TimeGrid, RejectsNonMultipleHorizon) {
  EXPECT_THROW(make_time_grid(1.0, 0.3), NodeMismatch);
  EXPECT_THROW(make_time_grid(1.0, 0.0), NegativeTime);
  EXPECT_EQ(make_time_grid(1.0, 0.25).count, 5u);
}

TEST(Duhamel, WeightsMatchQuadrature) {
  for (double lambda : {0.0, 1e-3, 0.5, 3.0, 40.0}) {
    const double dt = 0.1;
    auto w = duhamel_weights(lambda, dt);
    // tau in [0, dt]: g_m gets tau/dt, g_{m+1} gets 1 - tau/dt
    auto q0 = simpson([&](double t) { return std::exp(-lambda * t) * t / dt; }, 0, dt, 2000);
    auto q1 = simpson([&](double t) { return std::exp(-lambda * t) * (1 - t / dt); }, 0, dt, 2000);
    EXPECT_NEAR(w.w0, q0, 1e-13) << lambda;
    EXPECT_NEAR(w.w1, q1, 1e-13) << lambda;
  }
  auto w = duhamel_weights(0.0, 0.2);
  EXPECT_DOUBLE_EQ(w.w0, 0.1);
  EXPECT_DOUBLE_EQ(w.w1, 0.1);
  // continuity across the series switch
  auto a = duhamel_weights(0.1 - 1e-12, 1.0), b = duhamel_weights(0.1 + 1e-12, 1.0);
  EXPECT_NEAR(a.w0, b.w0, 1e-11);
  EXPECT_NEAR(a.w1, b.w1, 1e-11);
}

TEST(Duhamel, ZeroAndGradientForcing) {
  auto g = make_grid(8, kTwoPi);
  ForcedTrajectory f{make_time_grid_steps(4, 0.1), std::vector<VectorField>(5, VectorField(g))};
  for (const auto& u : duhamel(f)) EXPECT_EQ(l2_norm(u), 0.0);

  for (std::size_t m = 0; m < 5; ++m)
    f.g[m] = gradient(random_divfree_field(g, 40 + m, 1.0, 1.0)[1]);
  for (const auto& u : duhamel(f)) EXPECT_LT(l2_norm(u), 1e-14);

  ForcedTrajectory empty{TimeGrid{}, {}};
  EXPECT_THROW(duhamel(empty), EmptyTrajectory);
}

TEST(Duhamel, ConstantSingleMode) {
  auto g = make_grid(16, kTwoPi);
  const double a = 0.8, k2 = 2.0;
  const auto nodes = make_time_grid(1.0, 0.05);
  ForcedTrajectory f{nodes, std::vector<VectorField>(nodes.count, shear(g, a))};
  auto u = duhamel(f);
  for (std::size_t m = 0; m < nodes.count; ++m) {
    const double t = nodes.time(m);
    const double expect = a * (1 - std::exp(-k2 * t)) / k2;
    EXPECT_LT(l2_norm(u[m] - expect * shear(g, 1.0)), 1e-13 * std::max(1.0, l2_norm(u[m])));
    EXPECT_TRUE(u[m].solenoidal());
  }
  EXPECT_NEAR(l2_norm(u.back()), a * (1 - std::exp(-k2)) / k2 * l2_norm(shear(g, 1.0)), 1e-13);
}

TEST(Duhamel, MatchesDirectQuadrature) {
  auto g = make_grid(8, kTwoPi);
  const std::size_t count = 9;
  const double dt = 0.07;
  auto f = random_forcing(g, count, dt, 3, false);
  auto u = duhamel(f);

  // O(M^2) oracle: each mode, each interval, 8-point Gauss-Legendre
  const double xs[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                       -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                       0.7966664774136267,  0.9602898564975363};
  const double ws[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                       0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                       0.2223810344533745, 0.1012285362903763};
  std::vector<VectorField> pg;
  for (const auto& x : f.g) pg.push_back(leray_project(x));
  const auto k2 = g->k2();
  double worst = 0.0, scale = 0.0;
  for (std::size_t m = 1; m < count; ++m) {
    const double tm = f.nodes.time(m);
    for (std::size_t i = 0; i < k2.size(); ++i) {
      for (int c = 0; c < 3; ++c) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          const double t0 = f.nodes.time(j);
          for (int q = 0; q < 8; ++q) {
            const double s = t0 + 0.5 * dt * (xs[q] + 1.0);
            const double theta = (s - t0) / dt;
            acc += 0.5 * dt * ws[q] * std::exp(-k2[i] * (tm - s)) *
                   ((1 - theta) * pg[j][c][i] + theta * pg[j + 1][c][i]);
          }
        }
        worst = std::max(worst, std::abs(acc - u[m][c][i]));
        scale = std::max(scale, std::abs(acc));
      }
    }
  }
  EXPECT_LT(worst, 1e-10 * std::max(1.0, scale));
}

TEST(Duhamel, EnergyBoundAtDiscreteLevel) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto g = make_grid(16, kTwoPi);
    const std::size_t count = 21;
    const double dt = 0.05;
    auto f = random_forcing(g, count, dt, seed * 101, true);
    auto u = duhamel(f);
    std::vector<double> hm1(count), l2(count), h1(count);
    for (std::size_t m = 0; m < count; ++m) {
      hm1[m] = sobolev_seminorm(f.g[m], -1.0);
      l2[m] = l2_norm(u[m]);
      h1[m] = sobolev_seminorm(u[m], 1.0);
    }
    const double rhs = mixed_norm_series(hm1, dt, 2.0);
    EXPECT_LE(mixed_norm_series(l2, dt, kInf), 1.05 * rhs / std::sqrt(2.0));
    EXPECT_LE(mixed_norm_series(h1, dt, 2.0), 1.05 * rhs);
  }
}

TEST(Duhamel, TimeContinuity) {
  auto g = make_grid(8, kTwoPi);
  double prev = 0.0;
  for (int r = 0; r < 3; ++r) {
    const std::size_t steps = 8u << r;
    const double dt = 0.4 / steps;
    ForcedTrajectory f{make_time_grid_steps(steps, dt), {}};
    for (std::size_t m = 0; m <= steps; ++m)
      f.g.push_back(std::cos(3.0 * f.nodes.time(m)) * random_divfree_field(g, 9, 1.0, 1.0));
    auto u = duhamel(f);
    double jump = 0.0;
    for (std::size_t m = 0; m + 1 < u.size(); ++m) jump = std::max(jump, l2_norm(u[m + 1] - u[m]));
    if (r > 0) EXPECT_NEAR(prev / jump, 2.0, 0.2);
    prev = jump;
  }
}

TEST(Stokes, ZeroAndGradient) {
  auto g = make_grid(8, kTwoPi);
  ForcedTrajectory f{make_time_grid_steps(4, 0.1), std::vector<VectorField>(5, VectorField(g))};
  auto s0 = stokes_solve(f, 1.5, 9.0 / 8.0);
  EXPECT_EQ(s0.regularity_ratio, 0.0);

  for (std::size_t m = 0; m < 5; ++m)
    f.g[m] = gradient(random_divfree_field(g, 70 + m, 1.0, 1.0)[2]);
  auto s = stokes_solve(f, 1.5, 9.0 / 8.0);
  for (std::size_t m = 0; m < 5; ++m) {
    EXPECT_LT(l2_norm(s.u[m]), 1e-14);
    EXPECT_LT(rel_diff(s.grad_p[m], f.g[m]), 1e-13);
  }
}

TEST(Stokes, SolenoidalRatioStableUnderRefinement) {
  auto g = make_grid(8, kTwoPi);
  VectorField a = random_divfree_field(g, 21, 1.0, 1.0), b = random_divfree_field(g, 22, 1.0, 1.0);
  double ratios[2];
  for (int r = 0; r < 2; ++r) {
    const std::size_t steps = 10u << r;
    const double dt = 0.5 / steps;
    ForcedTrajectory f{make_time_grid_steps(steps, dt), {}};
    for (std::size_t m = 0; m <= steps; ++m) {
      const double t = f.nodes.time(m);
      f.g.push_back(std::cos(2 * t) * a + std::sin(5 * t) * b);
    }
    auto s = stokes_solve(f, 1.5, 4.0 / 3.0);
    for (const auto& p : s.grad_p) EXPECT_LT(l2_norm(p), 1e-14);
    ratios[r] = s.regularity_ratio;
    EXPECT_TRUE(std::isfinite(ratios[r]));
    EXPECT_GT(ratios[r], 0.0);
  }
  EXPECT_LT(ratios[0] / ratios[1], 2.0);
  EXPECT_GT(ratios[0] / ratios[1], 0.5);
}

TEST(HeatFlow, GradientDecayConstant) {
  // t^{5/8} ||grad e^{t Lap} v0||_4 / ||v0||_3 over t in [0.01, 1], two grids
  double sup[2];
  for (int r = 0; r < 2; ++r) {
    auto g = make_grid(16 << r, kTwoPi);
    sup[r] = 0.0;
    for (std::uint64_t seed : {1u, 2u}) {
      VectorField v0 = random_divfree_field(g, seed, 1.0, 1.0);
      const double l3 = lp_norm(v0, 3.0);
      for (double t : {0.01, 0.03, 0.1, 0.3, 1.0}) {
        const PhysicalTensor grad = gradient_physical(heat_flow(v0, t));
        std::vector<double> mag(g->physical_size(), 0.0);
        for (std::size_t p = 0; p < mag.size(); ++p) {
          double acc = 0.0;
          for (const auto& comp : grad.c) acc += comp[p] * comp[p];
          mag[p] = std::sqrt(acc);
        }
        sup[r] = std::max(sup[r], std::pow(t, 0.625) * lp_norm_samples(mag, g->cell_volume(), 4.0) / l3);
      }
    }
  }
  EXPECT_LT(sup[1], 2.0 * sup[0]);
  EXPECT_LT(sup[0], 2.0 * sup[1]);
}

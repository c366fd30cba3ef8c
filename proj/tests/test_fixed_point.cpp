#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "l3mhd/fixed_point.hpp"

using namespace l3mhd;

namespace {

QuadraticProblem<double> scalar(double c1, double c2, double r) {
  QuadraticProblem<double> p;
  p.norm = [](double x) { return std::abs(x); };
  p.bilinear = [c1](double a, double b) { return c1 * a * b; };
  p.linear = [c2](double a) { return c2 * a; };
  p.source = r;
  p.zero = 0.0;
  p.c1 = c1;
  p.c2 = c2;
  p.r_norm = std::abs(r);
  return p;
}

// independent oracle: smaller root of c1 x^2 - (1-c2) x + r by bisection
double smaller_root(double c1, double c2, double r) {
  double lo = 0.0, hi = (1 - c2) / (2 * c1);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (c1 * mid * mid - (1 - c2) * mid + r > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(CheckCondition, ClosedForms) {
  auto a = check_condition(1.0, 0.0, 0.21);
  ASSERT_TRUE(a.ok);
  EXPECT_NEAR(a.x1, 0.3, 1e-15);
  EXPECT_NEAR(a.x2, 0.7, 1e-15);

  EXPECT_FALSE(check_condition(1.0, 0.0, 0.25).ok);

  auto b = check_condition(0.5, 0.5, 0.1);
  ASSERT_TRUE(b.ok);
  EXPECT_NEAR(b.x1, 0.5 - std::sqrt(0.05), 1e-15);
  EXPECT_NEAR(b.x1, 0.27639, 1e-5);
  EXPECT_NEAR(b.x1, smaller_root(0.5, 0.5, 0.1), 1e-14);

  auto z = check_condition(2.0, 0.3, 0.0);
  ASSERT_TRUE(z.ok);
  EXPECT_EQ(z.x1, 0.0);
  EXPECT_NEAR(z.x2, 0.35, 1e-15);
}

TEST(CheckCondition, RejectsBadConstants) {
  EXPECT_THROW(check_condition(0.0, 0.1, 0.1), InvalidConstants);
  EXPECT_THROW(check_condition(1.0, 1.0, 0.0), InvalidConstants);
  EXPECT_THROW(check_condition(1.0, -0.1, 0.0), InvalidConstants);
  EXPECT_THROW(check_condition(1.0, 0.1, -1.0), InvalidConstants);
}

TEST(CheckCondition, GammaIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double c1 = 0.01 + 5 * u(rng), c2 = 0.99 * u(rng);
    const double r = u(rng) * (1 - c2) * (1 - c2) / (4 * c1);
    auto c = check_condition(c1, c2, r);
    ASSERT_TRUE(c.ok);
    EXPECT_GT(c.x2, c.x1);
    EXPECT_NEAR(c.x1, smaller_root(c1, c2, r), 1e-12 * std::max(1.0, c.x1));
    const double gamma = 1 - std::sqrt((c2 - 1) * (c2 - 1) - 4 * c1 * r);
    EXPECT_NEAR(2 * c1 * c.x1 + c2, gamma, 1e-12);
  }
}

TEST(Solve, ScalarProduct) {
  auto p = scalar(1.0, 0.0, 0.21);
  FixedPointCertificate cert;
  const double u = solve(p, 1e-13, 500, cert);
  EXPECT_NEAR(u, 0.3, 1e-12);
  EXPECT_NEAR(cert.gamma, 0.6, 1e-14);
  EXPECT_TRUE(cert.within_ball);
  EXPECT_LE(cert.max_iterate_norm, cert.x1 + 1e-13);
  for (double r : cert.step_ratios()) EXPECT_LE(r, cert.gamma + 0.05);
  const auto& res = cert.residuals;
  for (std::size_t n = 2; n < res.size(); ++n) EXPECT_LE(res[n], cert.gamma * res[n - 1] * 1.05);
}

TEST(Solve, ZeroSourceIsImmediate) {
  auto p = scalar(3.0, 0.4, 0.0);
  FixedPointCertificate cert;
  EXPECT_EQ(solve(p, 1e-12, 10, cert), 0.0);
  EXPECT_EQ(cert.iterations, 1u);
  EXPECT_EQ(cert.x1, 0.0);
}

TEST(Solve, LinearResolvent) {
  QuadraticProblem<double> p = scalar(1.0, 0.5, 0.0);
  p.bilinear = [](double, double) { return 0.0; };
  p.source = 0.01;
  p.r_norm = 0.01;
  FixedPointCertificate cert;
  EXPECT_NEAR(solve(p, 1e-14, 200, cert), 0.02, 1e-13);
  EXPECT_TRUE(cert.within_ball);
}

TEST(Solve, ConditionAndConvergenceErrors) {
  EXPECT_THROW(solve(scalar(1.0, 0.0, 0.25), 1e-12, 100), ConditionViolated);
  EXPECT_THROW(solve(scalar(1.0, 0.0, 0.24), 1e-15, 3), NoConvergence);
}

TEST(Solve, VectorStateWithProbes) {
  using V = std::array<double, 2>;
  struct Vec {
    V x{};
    Vec operator+(const Vec& o) const { return {{x[0] + o.x[0], x[1] + o.x[1]}}; }
    Vec operator-(const Vec& o) const { return {{x[0] - o.x[0], x[1] - o.x[1]}}; }
  };
  QuadraticProblem<Vec> p;
  p.norm = [](const Vec& a) { return std::abs(a.x[0]) + std::abs(a.x[1]); };
  // |B(a,b)| <= |a||b| in the l1 norm
  p.bilinear = [](const Vec& a, const Vec& b) {
    return Vec{{0.5 * a.x[0] * b.x[1], 0.5 * a.x[1] * b.x[0]}};
  };
  p.linear = [](const Vec& a) { return Vec{{0.25 * a.x[1], 0.25 * a.x[0]}}; };
  p.source = Vec{{0.05, -0.1}};
  p.zero = Vec{};
  p.c1 = 0.5;
  p.c2 = 0.25;
  p.r_norm = 0.15;

  std::vector<Vec> probes;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) probes.push_back(Vec{{nd(rng), nd(rng)}});
  EXPECT_NO_THROW(validate_constants(p, probes));

  FixedPointCertificate cert;
  Vec u = solve(p, 1e-14, 200, cert);
  Vec back = p.bilinear(u, u) + p.linear(u) + p.source;
  EXPECT_LT(p.norm(back - u), 1e-13);
  EXPECT_LE(p.norm(u), cert.x1 + 1e-13);
  EXPECT_TRUE(cert.within_ball);

  auto bad = p;
  bad.c2 = 0.1;
  EXPECT_THROW(validate_constants(bad, probes), InvalidConstants);
  bad = p;
  bad.c1 = 0.1;
  EXPECT_THROW(validate_constants(bad, probes), InvalidConstants);
}

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "l3mhd/errors.hpp"

namespace l3mhd {

/// u = B(u,u) + L(u) + R on a normed space. State needs copy, + and -.
template <class State>
struct QuadraticProblem {
  std::function<double(const State&)> norm;
  std::function<State(const State&, const State&)> bilinear;
  std::function<State(const State&)> linear;
  State source;
  State zero;
  double c1 = 0.0;
  double c2 = 0.0;
  double r_norm = 0.0;
};

struct FixedPointCertificate {
  double c1 = 0.0, c2 = 0.0, r_norm = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double gamma = 0.0;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  /// ||u_n - u_{n-1}|| for n = 1 .. iterations.
  std::vector<double> residuals;
  /// Largest ||u_n|| seen.
  double max_iterate_norm = 0.0;
  bool within_ball = true;

  /// residuals[n] / residuals[n-1], the observed contraction per step.
  std::vector<double> step_ratios() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < residuals.size(); ++i)
      if (residuals[i - 1] > 0.0) out.push_back(residuals[i] / residuals[i - 1]);
    return out;
  }
};

struct ConditionResult {
  bool ok = false;
  double x1 = std::numeric_limits<double>::quiet_NaN();
  double x2 = std::numeric_limits<double>::quiet_NaN();
};

/// (1 - c2)^2 > 4 c1 r, strictly. Roots of c1 x^2 + (c2 - 1) x + r = 0.
inline ConditionResult check_condition(double c1, double c2, double r_norm) {
  if (!(c1 > 0.0) || !(c2 >= 0.0) || !(c2 < 1.0) || !(r_norm >= 0.0) || !std::isfinite(c1) ||
      !std::isfinite(r_norm))
    throw InvalidConstants("c1 = " + std::to_string(c1) + ", c2 = " + std::to_string(c2) +
                           ", r = " + std::to_string(r_norm));
  const double disc = (c2 - 1.0) * (c2 - 1.0) - 4.0 * c1 * r_norm;
  if (!(disc > 0.0)) return {};
  const double root = std::sqrt(disc);
  const double b = 1.0 - c2;
  // x1 = (b - root)/(2 c1) written without cancellation
  const double x2 = (b + root) / (2.0 * c1);
  const double x1 = r_norm == 0.0 ? 0.0 : 2.0 * r_norm / (b + root);
  return {true, x1, x2};
}

/// Checks ||B(u,v)|| <= c1 ||u|| ||v|| and ||L(u)|| <= c2 ||u|| on each
/// probe pair. Throws InvalidConstants on the first violation.
template <class State>
void validate_constants(const QuadraticProblem<State>& p, const std::vector<State>& probes,
                        double slack = 1e-9) {
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const State& u = probes[i];
    const State& v = probes[(i + 1) % probes.size()];
    const double nu = p.norm(u), nv = p.norm(v);
    const double b = p.norm(p.bilinear(u, v));
    const double bound_b = p.c1 * nu * nv;
    if (b > bound_b + slack * std::max(1.0, bound_b))
      throw InvalidConstants("bilinear probe " + std::to_string(i) + ": " + std::to_string(b) +
                             " > c1 |u||v| = " + std::to_string(bound_b));
    const double l = p.norm(p.linear(u));
    const double bound_l = p.c2 * nu;
    if (l > bound_l + slack * std::max(1.0, bound_l))
      throw InvalidConstants("linear probe " + std::to_string(i) + ": " + std::to_string(l) +
                             " > c2 |u| = " + std::to_string(bound_l));
  }
}

/// Picard iteration u_{n+1} = B(u_n,u_n) + L(u_n) + R from u_0 = 0 until
/// ||u_{n+1} - u_n|| <= tol.
template <class State>
State solve(const QuadraticProblem<State>& p, double tol, std::size_t max_iter,
            FixedPointCertificate& cert) {
  const ConditionResult cond = check_condition(p.c1, p.c2, p.r_norm);
  if (!cond.ok)
    throw ConditionViolated("(1-c2)^2 = " + std::to_string((1 - p.c2) * (1 - p.c2)) +
                            " <= 4 c1 |R| = " + std::to_string(4 * p.c1 * p.r_norm));
  cert = FixedPointCertificate{};
  cert.c1 = p.c1;
  cert.c2 = p.c2;
  cert.r_norm = p.r_norm;
  cert.x1 = cond.x1;
  cert.x2 = cond.x2;
  cert.gamma = 2.0 * p.c1 * cond.x1 + p.c2;
  const double ball = cond.x1 * (1.0 + 1e-9) + tol;

  State u = p.zero;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    State next = p.bilinear(u, u) + p.linear(u) + p.source;
    const double res = p.norm(next - u);
    const double nrm = p.norm(next);
    cert.iterations = it;
    cert.residuals.push_back(res);
    cert.final_residual = res;
    cert.max_iterate_norm = std::max(cert.max_iterate_norm, nrm);
    if (nrm > ball) cert.within_ball = false;
    u = std::move(next);
    if (res <= tol) return u;
  }
  throw NoConvergence("residual " + std::to_string(cert.final_residual) + " after " +
                      std::to_string(max_iter) + " iterations (gamma = " +
                      std::to_string(cert.gamma) + ", tol = " + std::to_string(tol) + ")");
}

template <class State>
State solve(const QuadraticProblem<State>& p, double tol, std::size_t max_iter) {
  FixedPointCertificate cert;
  return solve(p, tol, max_iter, cert);
}

}  // namespace l3mhd

#include "l3mhd/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "l3mhd/errors.hpp"

namespace l3mhd {

double lp_norm_samples(std::span<const double> magnitudes, double cell_volume, double p) {
  if (p < 1.0) throw InvalidConstants("lp_norm: p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : magnitudes) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (double v : magnitudes) acc += v * v;
    return std::sqrt(acc * cell_volume);
  }
  for (double v : magnitudes) acc += std::pow(std::abs(v), p);
  return std::pow(acc * cell_volume, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p) {
  const auto values = f.to_physical();
  return lp_norm_samples(values, f.grid().cell_volume(), p);
}

double lp_norm(const VectorField& u, double p) {
  const auto x = u[0].to_physical();
  const auto y = u[1].to_physical();
  const auto z = u[2].to_physical();
  std::vector<double> mag(x.size());
  for (std::size_t i = 0; i < mag.size(); ++i)
    mag[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
  return lp_norm_samples(mag, u.grid().cell_volume(), p);
}

namespace {
double weighted_energy(const ScalarField& f, double s) {
  const Grid& g = f.grid();
  const auto k2 = g.k2();
  const auto w = g.weight();
  const bool inhomogeneous = s == -1.5;
  double acc = 0.0;
  for (std::size_t i = 0; i < k2.size(); ++i) {
    double m2;
    if (inhomogeneous) {
      m2 = std::pow(1.0 + k2[i], -1.5);
    } else {
      if (k2[i] == 0.0) continue;
      m2 = s == 1.0 ? k2[i] : (s == -1.0 ? 1.0 / k2[i] : std::pow(k2[i], s));
    }
    acc += w[i] * m2 * std::norm(f[i]);
  }
  return acc * g.volume();
}
}  // namespace

double l2_norm(const ScalarField& f) {
  const auto w = f.grid().weight();
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::norm(f[i]);
  return std::sqrt(acc * f.grid().volume());
}

double l2_norm(const VectorField& u) {
  const double a = l2_norm(u[0]), b = l2_norm(u[1]), c = l2_norm(u[2]);
  return std::sqrt(a * a + b * b + c * c);
}

double sobolev_seminorm(const ScalarField& f, double s) { return std::sqrt(weighted_energy(f, s)); }

double sobolev_seminorm(const VectorField& u, double s) {
  return std::sqrt(weighted_energy(u[0], s) + weighted_energy(u[1], s) + weighted_energy(u[2], s));
}

double trapezoid(std::span<const double> values, double dt) {
  if (values.size() < 2) return 0.0;
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
  return acc * dt;
}

double mixed_norm_series(std::span<const double> per_node, double dt, double l) {
  if (per_node.empty()) throw EmptyTrajectory("mixed_norm: no nodes");
  if (std::isinf(l)) return *std::max_element(per_node.begin(), per_node.end());
  std::vector<double> powered(per_node.size());
  for (std::size_t i = 0; i < powered.size(); ++i) powered[i] = std::pow(per_node[i], l);
  return std::pow(trapezoid(powered, dt), 1.0 / l);
}

double mixed_norm(std::span<const VectorField> nodes, double dt, double l, double s) {
  if (nodes.empty()) throw EmptyTrajectory("mixed_norm: no nodes");
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = lp_norm(nodes[i], s);
  return mixed_norm_series(values, dt, l);
}

}  // namespace l3mhd

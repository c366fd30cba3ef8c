#include "l3mhd/calibration.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>

#include "l3mhd/caloric.hpp"
#include "l3mhd/io.hpp"
#include "l3mhd/norms.hpp"
#include "l3mhd/spectral.hpp"

namespace l3mhd {

namespace {

// Written by tools/calibrate; margins already applied.
constexpr double kI = kInterpolationMargin;
constexpr double kM = kCalibrationMargin;

const std::vector<CalibrationTable> kFrozen = {
    {16,
     2 * std::numbers::pi,
     kI * 0.42333512459348427,
     kM * 0.25864112197051387,
     kM * 0.47599562284492886,
     kM * 0.59854158008895386,
     {kM * 0.047702277383948347, kM * 0.10900676349740769, kM * 0.0096116713503497809},
     {kM * 0.13097534611100675, kM * 0.21464454599748811, kM * 0.16791357072661656,
      kM * 0.27676512677769916},
     true},
    {32,
     2 * std::numbers::pi,
     kI * 0.42800132670731417,
     kM * 0.25866610635171905,
     kM * 0.58359074046955783,
     kM * 0.69439714952879616,
     {kM * 0.044733341752995717, kM * 0.10190455359310634, kM * 0.0090341680571956601},
     {kM * 0.13877904613424077, kM * 0.21234983264443769, kM * 0.16635322557217377,
      kM * 0.27113132858617023},
     true},
};

VectorField peak(const GridPtr& g, double sigma) {
  ScalarField x(g);
  const auto k2 = g->k2();
  const auto mask = g->mask();
  for (std::size_t i = 0; i < k2.size(); ++i)
    if (mask[i] && k2[i] > 0.0) x[i] = std::exp(-sigma * sigma * k2[i]);
  return leray_project(VectorField(x, ScalarField(g), ScalarField(g)));
}

VectorField shear(const GridPtr& g, int mode) {
  ScalarField x(g);
  // sin(mode y) in the x component
  const int n = g->n();
  x[g->spectral_index(0, mode, 0)] = std::complex<double>(0.0, -0.5);
  x[g->spectral_index(0, n - mode, 0)] = std::complex<double>(0.0, 0.5);
  VectorField u(x, ScalarField(g), ScalarField(g), true);
  return u;
}

double gradient_l4(const VectorField& u) {
  const PhysicalTensor grad = gradient_physical(u);
  std::vector<double> mag(u.grid().physical_size(), 0.0);
  for (std::size_t p = 0; p < mag.size(); ++p) {
    double acc = 0.0;
    for (const auto& c : grad.c) acc += c[p] * c[p];
    mag[p] = std::sqrt(acc);
  }
  return lp_norm_samples(mag, u.grid().cell_volume(), 4.0);
}

bool same_box(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

std::vector<VectorField> calibration_probes(const GridPtr& grid) {
  std::vector<VectorField> out;
  for (double decay : {0.5, 1.0, 2.0, 3.0})
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      out.push_back(random_divfree_field(grid, 7919 * seed, 1.0, decay));
  out.push_back(shear(grid, 1));
  out.push_back(shear(grid, grid->max_retained_mode()));
  for (double sigma : {0.0, 0.1, 0.3}) out.push_back(peak(grid, sigma * grid->box_length() / (2 * std::numbers::pi)));
  return out;
}

double interpolation_ratio(const VectorField& f) {
  const double l2 = l2_norm(f), h1 = sobolev_seminorm(f, 1.0);
  if (l2 == 0.0) return 0.0;
  return lp_norm(f, 10.0 / 3.0) / (std::pow(l2, 0.4) * std::pow(h1, 0.6));
}

double fit_interpolation_constant(const GridPtr& grid) {
  double best = 0.0;
  for (const auto& f : calibration_probes(grid)) best = std::max(best, interpolation_ratio(f));
  return best;
}

double fit_heat_gradient_decay(const GridPtr& grid) {
  double best = 0.0;
  for (const auto& f : calibration_probes(grid)) {
    const double l3 = lp_norm(f, 3.0);
    for (double t : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0})
      best = std::max(best, std::pow(t, 0.625) * gradient_l4(heat_flow(f, t)) / l3);
  }
  return best;
}

std::array<double, 2> fit_caloric_constants(const GridPtr& grid) {
  std::array<double, 2> best{0.0, 0.0};
  const TimeGrid nodes = make_time_grid(1.0, 1.0 / 64);
  for (const auto& f : calibration_probes(grid)) {
    const double l3 = lp_norm(f, 3.0);
    std::vector<double> l5(nodes.count), l4(nodes.count);
    for (std::size_t m = 0; m < nodes.count; ++m) {
      const VectorField u = heat_flow(f, nodes.time(m));
      l5[m] = lp_norm(u, 5.0);
      l4[m] = lp_norm(u, 4.0);
    }
    best[0] = std::max(best[0], mixed_norm_series(l5, nodes.dt, 5.0) / l3);
    best[1] = std::max(best[1], mixed_norm_series(l4, nodes.dt, 8.0) / l3);
  }
  return best;
}

const std::vector<CalibrationTable>& frozen_calibrations() { return kFrozen; }

const CalibrationTable& calibration_for(const Grid& grid) {
  for (const auto& t : kFrozen)
    if (t.n == grid.n() && same_box(t.box_length, grid.box_length()) && grid.dealias()) return t;

  static std::mutex mu;
  static std::map<std::tuple<int, double, bool>, CalibrationTable> fitted;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(grid.n(), grid.box_length(), grid.dealias());
  auto it = fitted.find(key);
  if (it != fitted.end()) return it->second;

  auto g = make_grid(grid.n(), grid.box_length(), grid.dealias());
  const CalibrationTable* nearest = &kFrozen.front();
  for (const auto& t : kFrozen)
    if (std::abs(t.n - grid.n()) < std::abs(nearest->n - grid.n())) nearest = &t;
  CalibrationTable t = *nearest;
  t.n = grid.n();
  t.box_length = grid.box_length();
  t.frozen = false;
  t.interpolation = kInterpolationMargin * fit_interpolation_constant(g);
  t.heat_gradient_decay = kCalibrationMargin * fit_heat_gradient_decay(g);
  const auto cal = fit_caloric_constants(g);
  t.caloric_l5l5 = kCalibrationMargin * cal[0];
  t.caloric_l8l4 = kCalibrationMargin * cal[1];
  return fitted.emplace(key, t).first->second;
}

std::string calibration_hash(const CalibrationTable& t) {
  std::string text;
  char buf[64];
  auto add = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g;", x);
    text += buf;
  };
  add(t.n);
  add(t.box_length);
  add(t.interpolation);
  add(t.heat_gradient_decay);
  add(t.caloric_l5l5);
  add(t.caloric_l8l4);
  for (double x : t.nonlinear) add(x);
  for (double x : t.oscillation) add(x);
  add(t.frozen ? 1 : 0);
  return fnv1a_hex(text);
}

}  // namespace l3mhd

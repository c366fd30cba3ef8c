#include "l3mhd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "l3mhd/calibration.hpp"
#include "l3mhd/errors.hpp"
#include "l3mhd/norms.hpp"

namespace l3mhd {

std::vector<NodeRef> unique_nodes(const Trajectory& traj) {
  std::vector<NodeRef> out;
  for (std::size_t w = 0; w < traj.windows.size(); ++w) {
    const TimeGrid& nodes = traj.windows[w].nodes();
    for (std::size_t m = (w == 0 ? 0 : 1); m < nodes.count; ++m) out.push_back({w, m, nodes.time(m)});
  }
  return out;
}

FieldPath global_perturbation(const Trajectory& traj) {
  if (traj.windows.empty()) throw EmptyTrajectory("trajectory has no windows");
  if (traj.windows.size() == 1) return traj.windows.front().pert;
  FieldPath out;
  const double t0 = traj.t0();
  for (const auto& ref : unique_nodes(traj)) {
    const Window& w = traj.windows[ref.window];
    out.v.push_back(w.total_v(ref.m) - heat_flow(traj.v0(), ref.t - t0));
    out.h.push_back(w.total_h(ref.m) - heat_flow(traj.h0(), ref.t - t0));
  }
  return out;
}

namespace {

constexpr double kEnergyFloor = 1e-12;

double dot_sum(const PhysicalVector& a, const PhysicalVector& b, std::size_t p) {
  return a.c[0][p] * b.c[0][p] + a.c[1][p] * b.c[1][p] + a.c[2][p] * b.c[2][p];
}

// sum_ij a_i b_j G(i,j) at point p: (a x b) : grad c with G(i,j) = d_j c_i
double contract(const PhysicalVector& a, const PhysicalVector& b, const PhysicalTensor& g,
                std::size_t p) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += a.c[i][p] * b.c[j][p] * g(i, j)[p];
  return acc;
}

PhysicalVector add(const PhysicalVector& a, const PhysicalVector& b) {
  PhysicalVector out = a;
  for (int i = 0; i < 3; ++i)
    for (std::size_t p = 0; p < out.c[i].size(); ++p) out.c[i][p] += b.c[i][p];
  return out;
}

// Second-difference aggregates of a rate series f over the steps of a window.
void second_differences(const std::vector<double>& f, double dt, double& sum, double& peak) {
  for (std::size_t m = 1; m + 1 < f.size(); ++m) {
    const double d2 = std::abs(f[m + 1] - 2.0 * f[m] + f[m - 1]);
    sum += d2 * dt;
    peak = std::max(peak, d2);
  }
}

void finish(EnergyReport& r, double tolerance) {
  r.tolerance = tolerance >= 0.0 ? tolerance : 10.0 * (r.aggregate + kEnergyFloor);
  r.min_residual = std::numeric_limits<double>::infinity();
  for (const auto& row : r.rows) {
    r.min_residual = std::min(r.min_residual, row.residual);
    r.max_abs_residual = std::max(r.max_abs_residual, std::abs(row.residual));
  }
  if (r.rows.empty()) r.min_residual = 0.0;
  for (double s : r.step_residuals) r.max_step_residual = std::max(r.max_step_residual, std::abs(s));
  r.pass = r.min_residual >= -r.tolerance;
}

}  // namespace

EnergyReport global_energy_audit(const Trajectory& traj, double tolerance) {
  EnergyReport r;
  r.kind = EnergyKind::global;
  for (std::size_t wi = 0; wi < traj.windows.size(); ++wi) {
    const Window& w = traj.windows[wi];
    const auto& cache = w.ctx->cache();
    const Grid& g = *w.ctx->grid();
    const double dv = g.cell_volume();
    const TimeGrid& nodes = w.nodes();
    std::vector<double> energy(nodes.count), diss(nodes.count), cross(nodes.count);
    for (std::size_t m = 0; m < nodes.count; ++m) {
      GlobalNode node;
      node.t = nodes.time(m);
      node.window = wi;
      node.picard_iters = w.cert.iterations;
      const VectorField& v2 = w.pert.v[m];
      const VectorField& h2 = w.pert.h[m];
      const double lv = l2_norm(v2), lh = l2_norm(h2);
      const double gv = sobolev_seminorm(v2, 1.0), gh = sobolev_seminorm(h2, 1.0);
      node.e_v2 = 0.5 * lv * lv;
      node.e_h2 = 0.5 * lh * lh;
      node.diss_v2 = gv * gv;
      node.diss_h2 = gh * gh;

      const PhysicalVector pv2 = to_physical(v2), ph2 = to_physical(h2);
      const PhysicalTensor gv2 = gradient_physical(v2), gh2 = gradient_physical(h2);
      const PhysicalVector& v1 = cache.v[m];
      const PhysicalVector& h1 = cache.h[m];
      const PhysicalVector v = add(v1, pv2), h = add(h1, ph2);
      double c = 0.0;
      for (std::size_t p = 0; p < g.physical_size(); ++p)
        c += contract(v1, v, gv2, p) - contract(h1, h, gv2, p) - contract(v1, h, gh2, p) +
             contract(h1, v, gh2, p);
      node.cross = c * dv;
      node.l3_v = lp_norm(w.total_v(m), 3.0);
      node.l3_h = lp_norm(w.total_h(m), 3.0);

      energy[m] = node.e_v2 + node.e_h2;
      diss[m] = node.diss_v2 + node.diss_h2;
      cross[m] = node.cross;
      r.nodes.push_back(node);
    }
    double diss_int = 0.0, cross_int = 0.0;
    const double dt = nodes.dt;
    for (std::size_t m = 0; m < nodes.count; ++m) {
      if (m > 0) {
        diss_int += 0.5 * dt * (diss[m - 1] + diss[m]);
        cross_int += 0.5 * dt * (cross[m - 1] + cross[m]);
        r.step_residuals.push_back((energy[m] - energy[m - 1]) / dt + 0.5 * (diss[m - 1] + diss[m]) -
                                   0.5 * (cross[m - 1] + cross[m]));
      }
      const double lhs = energy[m] + diss_int;
      r.rows.push_back({nodes.time(m), lhs, cross_int, cross_int - lhs});
    }
    std::vector<double> rate(nodes.count);
    for (std::size_t m = 0; m < nodes.count; ++m) rate[m] = cross[m] - diss[m];
    second_differences(rate, dt, r.aggregate, r.step_aggregate);
  }
  finish(r, tolerance);
  return r;
}

double TestFunction::time_value(double t) const {
  if (t <= t_start || t >= t_end) return 0.0;
  const double c = 0.5 * (t_start + t_end), rad = 0.5 * (t_end - t_start);
  const double q = (t - c) / rad;
  return (1 - q * q) * (1 - q * q);
}

double TestFunction::time_derivative(double t) const {
  if (t <= t_start || t >= t_end) return 0.0;
  const double c = 0.5 * (t_start + t_end), rad = 0.5 * (t_end - t_start);
  const double q = (t - c) / rad;
  return -4.0 * q * (1 - q * q) / rad;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (space) {
    case Space::constant: os << "constant"; break;
    case Space::periodic_quartic: os << "periodic_quartic"; break;
    case Space::quartic: os << "quartic(r=" << radius << ")"; break;
  }
  os << " centre (" << center[0] << "," << center[1] << "," << center[2] << ") time bump [" << t_start
     << "," << t_end << "]";
  return os.str();
}

TestFunction preset_test_function(const Trajectory& traj, std::size_t window,
                                  TestFunction::Space space) {
  if (window >= traj.windows.size()) throw UnsupportedTestFunction("no such window");
  const TimeGrid& nodes = traj.windows[window].nodes();
  const std::size_t steps = nodes.count - 1;
  if (steps < 4) throw UnsupportedTestFunction("window too short for a time bump");
  const std::size_t a = std::max<std::size_t>(1, steps / 8);
  const std::size_t b = std::min(steps - 1, steps - steps / 8);
  TestFunction phi;
  phi.space = space;
  const double L = traj.grid()->box_length();
  phi.center = {L / 2, L / 2, L / 2};
  phi.radius = L / 4;
  phi.t_start = nodes.time(a);
  phi.t_end = nodes.time(b);
  return phi;
}

namespace {

struct SpaceProfile {
  std::vector<double> phi;
  std::array<std::vector<double>, 3> grad;
  std::vector<double> lap;
};

void profile_1d(const TestFunction& f, double x, double c, double L, double& s, double& ds, double& d2s) {
  switch (f.space) {
    case TestFunction::Space::constant:
      s = 1.0;
      ds = d2s = 0.0;
      return;
    case TestFunction::Space::periodic_quartic: {
      const double k = 2 * std::numbers::pi / L;
      const double a = 0.5 * k * (x - c);
      const double ca = std::cos(a), sa = std::sin(a);
      s = ca * ca * ca * ca;
      ds = -4.0 * ca * ca * ca * sa * 0.5 * k;
      d2s = (12.0 * ca * ca * sa * sa - 4.0 * ca * ca * ca * ca) * 0.25 * k * k;
      return;
    }
    case TestFunction::Space::quartic: {
      double d = std::fmod(x - c, L);
      if (d < -L / 2) d += L;
      if (d >= L / 2) d -= L;
      const double q = d / f.radius;
      if (std::abs(q) >= 1.0) {
        s = ds = d2s = 0.0;
        return;
      }
      s = (1 - q * q) * (1 - q * q);
      ds = -4.0 * q * (1 - q * q) / f.radius;
      d2s = (12.0 * q * q - 4.0) / (f.radius * f.radius);
      return;
    }
  }
}

SpaceProfile sample_profile(const TestFunction& f, const Grid& g) {
  const int n = g.n();
  const double L = g.box_length(), h = L / n;
  std::array<std::vector<double>, 3> s, ds, d2s;
  for (int d = 0; d < 3; ++d) {
    s[d].resize(n);
    ds[d].resize(n);
    d2s[d].resize(n);
    for (int i = 0; i < n; ++i) profile_1d(f, i * h, f.center[d], L, s[d][i], ds[d][i], d2s[d][i]);
  }
  SpaceProfile p;
  p.phi.resize(g.physical_size());
  for (auto& v : p.grad) v.resize(g.physical_size());
  p.lap.resize(g.physical_size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t q = g.physical_index(i, j, k);
        p.phi[q] = s[0][i] * s[1][j] * s[2][k];
        p.grad[0][q] = ds[0][i] * s[1][j] * s[2][k];
        p.grad[1][q] = s[0][i] * ds[1][j] * s[2][k];
        p.grad[2][q] = s[0][i] * s[1][j] * ds[2][k];
        p.lap[q] = d2s[0][i] * s[1][j] * s[2][k] + s[0][i] * d2s[1][j] * s[2][k] +
                   s[0][i] * s[1][j] * d2s[2][k];
      }
  return p;
}

int padded_size(int n) { return 2 * ((3 * n + 3) / 4); }

}  // namespace

EnergyReport local_energy_audit(const Trajectory& traj, const TestFunction& phi, double tolerance) {
  if (!(phi.t_end > phi.t_start))
    throw UnsupportedTestFunction("empty time support [" + std::to_string(phi.t_start) + ", " +
                                  std::to_string(phi.t_end) + "]");
  if (phi.space == TestFunction::Space::quartic && !(phi.radius > 0.0))
    throw UnsupportedTestFunction("quartic bump needs a positive radius");
  std::size_t wi = traj.windows.size();
  for (std::size_t w = 0; w < traj.windows.size(); ++w) {
    const TimeGrid& nodes = traj.windows[w].nodes();
    const double slack = 1e-12 * std::max(1.0, nodes.horizon());
    if (phi.t_start > nodes.t0 + slack && phi.t_end < nodes.horizon() - slack) wi = w;
  }
  if (wi == traj.windows.size())
    throw UnsupportedTestFunction("time support [" + std::to_string(phi.t_start) + ", " +
                                  std::to_string(phi.t_end) +
                                  "] must lie strictly inside one window of (0, T)");

  const Window& w = traj.windows[wi];
  const Grid& coarse = *w.ctx->grid();
  const GridPtr fine = make_grid(padded_size(coarse.n()), coarse.box_length(), false);
  const SpaceProfile prof = sample_profile(phi, *fine);
  const double dv = fine->cell_volume();
  const std::size_t size = fine->physical_size();
  const TimeGrid& nodes = w.nodes();

  EnergyReport r;
  r.kind = EnergyKind::local;
  r.test_function = phi.describe();
  std::vector<double> boundary(nodes.count, 0.0), diss(nodes.count, 0.0), rhs(nodes.count, 0.0);
  for (std::size_t m = 0; m < nodes.count; ++m) {
    const double t = nodes.time(m);
    const double th = phi.time_value(t), dth = phi.time_derivative(t);
    if (th == 0.0 && dth == 0.0) continue;
    const VectorField& v2s = w.pert.v[m];
    const VectorField& h2s = w.pert.h[m];
    const VectorField& v1s = w.cal().v1[m];
    const VectorField& h1s = w.cal().h1[m];
    const ScalarField pis = recover_pressure(v2s, h2s, v1s, h1s);
    const PhysicalVector v2 = to_physical(resample(v2s, fine)), h2 = to_physical(resample(h2s, fine));
    const PhysicalVector v1 = to_physical(resample(v1s, fine)), h1 = to_physical(resample(h1s, fine));
    const PhysicalTensor gv2 = gradient_physical(resample(v2s, fine));
    const PhysicalTensor gh2 = gradient_physical(resample(h2s, fine));
    const std::vector<double> pi = resample(pis, fine).to_physical();

    double b = 0.0, d = 0.0, q = 0.0;
    for (std::size_t p = 0; p < size; ++p) {
      const double ph = prof.phi[p];
      const double e = dot_sum(v2, v2, p) + dot_sum(h2, h2, p);
      double g2 = 0.0;
      for (int c = 0; c < 9; ++c) g2 += gv2.c[c][p] * gv2.c[c][p] + gh2.c[c][p] * gh2.c[c][p];
      b += ph * e;
      d += ph * g2;

      double v2gphi = 0.0, h2gphi = 0.0;
      for (int j = 0; j < 3; ++j) {
        v2gphi += v2.c[j][p] * prof.grad[j][p];
        h2gphi += h2.c[j][p] * prof.grad[j][p];
      }
      double term = e * (th * prof.lap[p] + dth * ph);
      term += th * (e + 2.0 * pi[p]) * v2gphi;
      term -= 2.0 * th * dot_sum(v2, h2, p) * h2gphi;
      double groups = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const double a = v1.c[i][p] * v2.c[j][p] + v2.c[i][p] * v1.c[j][p] + v1.c[i][p] * v1.c[j][p] -
                           h1.c[i][p] * h2.c[j][p] - h2.c[i][p] * h1.c[j][p] - h1.c[i][p] * h1.c[j][p];
          const double gg = h1.c[i][p] * v2.c[j][p] + h2.c[i][p] * v1.c[j][p] + h1.c[i][p] * v1.c[j][p] -
                            v1.c[i][p] * h2.c[j][p] - v2.c[i][p] * h1.c[j][p] - v1.c[i][p] * h1.c[j][p];
          groups += a * (ph * gv2(i, j)[p] + v2.c[i][p] * prof.grad[j][p]);
          groups += gg * (ph * gh2(i, j)[p] + h2.c[i][p] * prof.grad[j][p]);
        }
      }
      term += 2.0 * th * groups;
      q += term;
    }
    boundary[m] = th * b * dv;
    diss[m] = 2.0 * th * d * dv;
    rhs[m] = q * dv;
  }

  const double dt = nodes.dt;
  double diss_int = 0.0, rhs_int = 0.0;
  std::vector<double> rate(nodes.count);
  for (std::size_t m = 0; m < nodes.count; ++m) {
    if (m > 0) {
      diss_int += 0.5 * dt * (diss[m - 1] + diss[m]);
      rhs_int += 0.5 * dt * (rhs[m - 1] + rhs[m]);
      r.step_residuals.push_back((boundary[m] - boundary[m - 1]) / dt + 0.5 * (diss[m - 1] + diss[m]) -
                                 0.5 * (rhs[m - 1] + rhs[m]));
    }
    const double lhs = boundary[m] + diss_int;
    r.rows.push_back({nodes.time(m), lhs, rhs_int, rhs_int - lhs});
    rate[m] = rhs[m] - diss[m];
  }
  second_differences(rate, dt, r.aggregate, r.step_aggregate);
  finish(r, tolerance);
  return r;
}

AprioriReport apriori_audit(const Trajectory& traj, std::vector<double> horizons) {
  const FieldPath p = global_perturbation(traj);
  const double dt = traj.params.dt;
  const double T = traj.horizon() - traj.t0();
  if (horizons.empty()) horizons = {T / 4, T / 2, T};
  AprioriReport r;
  double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
  double xmin = emin, xmax = 0.0;
  for (double hz : horizons) {
    const std::size_t k = std::min<std::size_t>(p.size() - 1, static_cast<std::size_t>(std::llround(hz / dt)));
    if (k == 0) throw NodeMismatch("apriori_audit: horizon below one step");
    const double h = k * dt;
    FieldPath head;
    head.v.assign(p.v.begin(), p.v.begin() + k + 1);
    head.h.assign(p.h.begin(), p.h.begin() + k + 1);
    double sup = 0.0;
    for (std::size_t m = 0; m <= k; ++m) {
      const double a = l2_norm(head.v[m]), b = l2_norm(head.h[m]);
      sup = std::max(sup, a * a + b * b);
    }
    AprioriRow row{h, sup / std::pow(h, 1.5), xt_norm(head, dt) / std::pow(h, 0.75)};
    emin = std::min(emin, row.energy_ratio);
    emax = std::max(emax, row.energy_ratio);
    xmin = std::min(xmin, row.xt_ratio);
    xmax = std::max(xmax, row.xt_ratio);
    r.rows.push_back(row);
  }
  auto spread = [](double lo, double hi) {
    if (hi == 0.0) return 1.0;
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
  };
  r.energy_spread = spread(emin, emax);
  r.xt_spread = spread(xmin, xmax);
  for (const auto& row : r.rows)
    if (!std::isfinite(row.energy_ratio) || !std::isfinite(row.xt_ratio)) r.pass = false;
  r.pass = r.pass && r.energy_spread < 4.0 && r.xt_spread < 4.0;
  return r;
}

CaloricBoundsReport caloric_bounds_audit(const CaloricPair& cal) {
  CaloricBoundsReport r;
  const Grid& g = cal.v0.grid();
  const CalibrationTable& k = calibration_for(g);
  const double dt = cal.nodes.dt;
  const double v0_3 = lp_norm(cal.v0, 3.0), h0_3 = lp_norm(cal.h0, 3.0);
  r.l3_data = v0_3 + h0_3;
  const std::size_t count = cal.v1.size();
  std::vector<double> v3(count), h3(count), v5(count), h5(count), v4(count), h4(count);
  for (std::size_t m = 0; m < count; ++m) {
    v3[m] = lp_norm(cal.v1[m], 3.0);
    h3[m] = lp_norm(cal.h1[m], 3.0);
    v5[m] = lp_norm(cal.v1[m], 5.0);
    h5[m] = lp_norm(cal.h1[m], 5.0);
    v4[m] = lp_norm(cal.v1[m], 4.0);
    h4[m] = lp_norm(cal.h1[m], 4.0);
  }
  const double sup_v = mixed_norm_series(v3, dt, kInf), sup_h = mixed_norm_series(h3, dt, kInf);
  r.linf_l3 = sup_v + sup_h;
  r.l5_l5 = mixed_norm_series(v5, dt, 5.0) + mixed_norm_series(h5, dt, 5.0);
  r.l8_l4 = mixed_norm_series(v4, dt, 8.0) + mixed_norm_series(h4, dt, 8.0);
  r.linf_contraction = sup_v <= v0_3 * (1 + 1e-9) + 1e-300 && sup_h <= h0_3 * (1 + 1e-9) + 1e-300;
  r.l5_within = r.l5_l5 <= k.caloric_l5l5 * r.l3_data * (1 + 1e-12);
  r.l8_within = r.l8_l4 <= k.caloric_l8l4 * r.l3_data * (1 + 1e-12);
  if (count > 1) {
    r.attainment = lp_norm(cal.v1[1] - cal.v0, 3.0) + lp_norm(cal.h1[1] - cal.h0, 3.0);
    VectorField lv(cal.v0.grid_ptr()), lh(cal.v0.grid_ptr());
    for (int c = 0; c < 3; ++c) {
      lv[c] = laplacian(cal.v0[c]);
      lh[c] = laplacian(cal.h0[c]);
    }
    r.attainment_bound = dt * (lp_norm(lv, 3.0) + lp_norm(lh, 3.0));
  }
  r.pass = r.linf_contraction && r.l5_within && r.l8_within &&
           r.attainment <= r.attainment_bound * (1 + 1e-9) + 1e-300;
  return r;
}

std::vector<std::pair<double, double>> default_nonlinear_pairs() {
  return {{1.5, 9.0 / 8.0}, {2.0, 1.0}, {1.0, 1.5}};
}

namespace {

double advective_mixed_norm(const std::vector<VectorField>& u, double dt, double l, double s) {
  std::vector<double> per(u.size());
  for (std::size_t m = 0; m < u.size(); ++m) {
    const PhysicalVector a = to_physical(u[m]);
    const PhysicalTensor g = gradient_physical(u[m]);
    std::vector<double> mag(u[m].grid().physical_size());
    for (std::size_t p = 0; p < mag.size(); ++p) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        double wi = 0.0;
        for (int j = 0; j < 3; ++j) wi += a.c[j][p] * g(i, j)[p];
        acc += wi * wi;
      }
      mag[p] = std::sqrt(acc);
    }
    per[m] = lp_norm_samples(mag, u[m].grid().cell_volume(), s);
  }
  return mixed_norm_series(per, dt, l);
}

}  // namespace

NonlinearReport nonlinear_norm_audit(const Trajectory& traj, std::vector<std::pair<double, double>> pairs) {
  if (pairs.empty()) pairs = default_nonlinear_pairs();
  for (const auto& [l, s] : pairs)
    if (!(l >= 1.0) || !(s >= 1.0) || std::abs(3.0 / s + 2.0 / l - 4.0) > 1e-12)
      throw ScalingViolation("(l, s) = (" + std::to_string(l) + ", " + std::to_string(s) +
                             "): 3/s + 2/l = " + std::to_string(3.0 / s + 2.0 / l));
  const FieldPath p = global_perturbation(traj);
  const double dt = traj.params.dt;
  const CalibrationTable& k = calibration_for(*traj.grid());
  const auto defaults = default_nonlinear_pairs();
  const double dv = xt_norm(p.v, dt), dh = xt_norm(p.h, dt);
  NonlinearReport r;
  for (const auto& [l, s] : pairs) {
    NonlinearRow row;
    row.l = l;
    row.s = s;
    row.ratio_v = dv == 0.0 ? 0.0 : advective_mixed_norm(p.v, dt, l, s) / (dv * dv);
    row.ratio_h = dh == 0.0 ? 0.0 : advective_mixed_norm(p.h, dt, l, s) / (dh * dh);
    for (std::size_t i = 0; i < defaults.size(); ++i)
      if (std::abs(defaults[i].first - l) < 1e-12 && std::abs(defaults[i].second - s) < 1e-12)
        row.constant = k.nonlinear[i];
    const double worst = std::max(row.ratio_v, row.ratio_h);
    row.pass = std::isfinite(worst) && (row.constant == 0.0 || worst <= row.constant);
    r.pass = r.pass && row.pass;
    r.rows.push_back(row);
  }
  return r;
}

const std::array<OscillationExponents, 4>& oscillation_exponents() {
  static const std::array<OscillationExponents, 4> e{{{0.5, 9.0 / 8.0, 4.0 / 3.0},
                                                      {9.0 / 8.0, 4.0 / 3.0, 9.0 / 8.0},
                                                      {0.75, 6.0 / 5.0, 5.0 / 4.0},
                                                      {1.5, 1.5, 1.0}}};
  return e;
}

OscillationReport oscillation_audit(const PressureDecomposition& d, double radius) {
  if (d.parts[0].empty()) throw EmptyTrajectory("oscillation_audit: no pressure nodes");
  const Grid& g = d.parts[0].front().grid();
  const int n = g.n();
  const double L = g.box_length();
  const double per = L / (2.0 * radius);
  const int boxes = static_cast<int>(std::llround(per));
  if (!(radius > 0.0) || radius > L / 2 * (1 + 1e-12) || std::abs(per - boxes) > 1e-9 || n % boxes != 0)
    throw InvalidGrid("oscillation_audit: radius " + std::to_string(radius) +
                      " does not tile the grid with boxes of side 2R");
  const int side = n / boxes;
  const std::size_t nb = static_cast<std::size_t>(boxes) * boxes * boxes;
  const double dv = g.cell_volume();
  const std::size_t count = d.nodes.count;
  const CalibrationTable& k = calibration_for(g);

  OscillationReport r;
  for (int part = 0; part < 4; ++part) {
    const auto& ex = oscillation_exponents()[part];
    std::vector<std::vector<double>> lhs(nb, std::vector<double>(count)), rhs(nb, std::vector<double>(count));
    for (std::size_t m = 0; m < count; ++m) {
      const std::vector<double> pi = d.parts[part][m].to_physical();
      const PhysicalVector gp = to_physical(d.grads[part][m]);
      for (int bx = 0; bx < boxes; ++bx)
        for (int by = 0; by < boxes; ++by)
          for (int bz = 0; bz < boxes; ++bz) {
            const std::size_t b = (static_cast<std::size_t>(bx) * boxes + by) * boxes + bz;
            double mean = 0.0;
            for (int i = 0; i < side; ++i)
              for (int j = 0; j < side; ++j)
                for (int l = 0; l < side; ++l)
                  mean += pi[g.physical_index(bx * side + i, by * side + j, bz * side + l)];
            mean /= static_cast<double>(side) * side * side;
            double osc = 0.0, grad = 0.0;
            for (int i = 0; i < side; ++i)
              for (int j = 0; j < side; ++j)
                for (int l = 0; l < side; ++l) {
                  const std::size_t p = g.physical_index(bx * side + i, by * side + j, bz * side + l);
                  osc += std::pow(std::abs(pi[p] - mean), 1.5);
                  grad += std::pow(std::sqrt(dot_sum(gp, gp, p)), ex.q);
                }
            lhs[b][m] = osc * dv;
            rhs[b][m] = std::pow(grad * dv, ex.outer);
          }
    }
    OscillationRow row;
    row.part = part + 1;
    row.radius = radius;
    const double rp = std::pow(radius, ex.r_power);
    for (std::size_t b = 0; b < nb; ++b) {
      const double lb = trapezoid(lhs[b], d.nodes.dt);
      const double rb = rp * trapezoid(rhs[b], d.nodes.dt);
      row.lhs += lb;
      row.rhs += rb;
      if (rb > 0.0) row.max_box_ratio = std::max(row.max_box_ratio, lb / rb);
      else if (lb > 0.0) row.max_box_ratio = std::numeric_limits<double>::infinity();
    }
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : (row.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    row.constant = k.oscillation[part];
    row.pass = std::isfinite(row.ratio) && (row.constant == 0.0 || row.ratio <= row.constant);
    r.pass = r.pass && row.pass;
    r.rows.push_back(row);
  }
  return r;
}

OscillationReport oscillation_audit(const PressureDecomposition& d, std::vector<double> radii) {
  if (d.parts[0].empty()) throw EmptyTrajectory("oscillation_audit: no pressure nodes");
  const double L = d.parts[0].front().grid().box_length();
  if (radii.empty()) radii = {L / 8, L / 4, L / 2};
  OscillationReport out;
  for (double R : radii) {
    OscillationReport one = oscillation_audit(d, R);
    out.pass = out.pass && one.pass;
    out.rows.insert(out.rows.end(), one.rows.begin(), one.rows.end());
  }
  return out;
}

double path_distance(const FieldPath& a, const FieldPath& b, double dt) {
  if (a.size() != b.size()) throw NodeMismatch("path_distance: node counts differ");
  std::vector<double> sq(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double x = l2_norm(a.v[m] - b.v[m]), y = l2_norm(a.h[m] - b.h[m]);
    sq[m] = x * x + y * y;
  }
  return std::sqrt(trapezoid(sq, dt));
}

SweepReport epsilon_sweep(const VectorField& v0, const VectorField& h0, const SchemeParams& params,
                          std::vector<double> levels) {
  if (levels.empty()) levels = {params.epsilon, params.epsilon / 2, params.epsilon / 4};
  std::vector<FieldPath> paths;
  for (double eps : levels) {
    SchemeParams p = params;
    p.epsilon = eps;
    paths.push_back(global_perturbation(solve(v0, h0, p)));
  }
  SweepReport r;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    SweepRow row{levels[i], 0.0};
    if (i + 1 < levels.size()) row.distance = path_distance(paths[i], paths[i + 1], params.dt);
    r.rows.push_back(row);
  }
  bool all_zero = true, decreasing = true;
  for (std::size_t i = 0; i + 1 < r.rows.size(); ++i) {
    if (r.rows[i].distance != 0.0) all_zero = false;
    if (i + 2 < r.rows.size() && !(r.rows[i + 1].distance < r.rows[i].distance)) decreasing = false;
  }
  r.pass = all_zero || decreasing;
  return r;
}

NormLedger norm_ledger(const Trajectory& traj) {
  NormLedger out;
  const FieldPath pert = global_perturbation(traj);
  const auto nodes = unique_nodes(traj);
  const double t0 = traj.t0();
  std::array<std::array<std::vector<double>, 8>, 4> series;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double s = nodes[i].t - t0;
    const std::array<VectorField, 4> f{heat_flow(traj.v0(), s), heat_flow(traj.h0(), s), pert.v[i], pert.h[i]};
    std::array<std::array<double, 8>, 4> row{};
    for (std::size_t k = 0; k < 4; ++k) {
      row[k] = {l2_norm(f[k]),           lp_norm(f[k], 3.0),          lp_norm(f[k], 4.0),
                lp_norm(f[k], 5.0),      lp_norm(f[k], 10.0 / 3.0),   sobolev_seminorm(f[k], 1.0),
                sobolev_seminorm(f[k], -1.0), sobolev_seminorm(f[k], -1.5)};
      for (std::size_t j = 0; j < 8; ++j) series[k][j].push_back(row[k][j]);
    }
    out.t.push_back(nodes[i].t);
    out.values.push_back(row);
  }
  const double dt = traj.params.dt;
  for (std::size_t k = 0; k < 4; ++k)
    out.mixed[k] = {mixed_norm_series(series[k][3], dt, 5.0), mixed_norm_series(series[k][2], dt, 8.0),
                    mixed_norm_series(series[k][0], dt, kInf), mixed_norm_series(series[k][5], dt, 2.0),
                    mixed_norm_series(series[k][4], dt, 10.0 / 3.0)};
  return out;
}

AuditFit fit_audit_constants(const GridPtr& grid) {
  AuditFit fit;
  const double L = grid->box_length();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const VectorField v0 = random_divfree_field(grid, 104729 * seed, 0.01, 2.0);
    const VectorField h0 = random_divfree_field(grid, 104729 * seed + 1, 0.01, 2.0);
    SchemeParams p;
    p.epsilon = 0.5;
    p.horizon = 0.25;
    p.dt = 1.0 / 64;
    const Trajectory traj = solve(v0, h0, p);
    const NonlinearReport nl = nonlinear_norm_audit(traj);
    for (std::size_t i = 0; i < 3; ++i)
      fit.nonlinear[i] = std::max({fit.nonlinear[i], nl.rows[i].ratio_v, nl.rows[i].ratio_h});
    for (std::size_t w = 0; w < traj.windows.size(); ++w) {
      const OscillationReport osc = oscillation_audit(pressure_decompose(traj, w), std::vector<double>{L / 8, L / 4, L / 2});
      for (const auto& row : osc.rows) fit.oscillation[row.part - 1] = std::max(fit.oscillation[row.part - 1], row.ratio);
    }
  }
  return fit;
}

}  // namespace l3mhd

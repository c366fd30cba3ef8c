#include "l3mhd/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

#include "l3mhd/errors.hpp"
#include "l3mhd/norms.hpp"
#include "l3mhd/verify.hpp"

namespace l3mhd {

namespace {

constexpr double kEnergyFloor = 1e-30;

std::vector<double> cumulative(const std::vector<double>& f, double dt) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t m = 1; m < f.size(); ++m) out[m] = out[m - 1] + 0.5 * dt * (f[m - 1] + f[m]);
  return out;
}

}  // namespace

GronwallBound gronwall_bound(double eta0, const std::vector<double>& phi, const std::vector<double>& psi,
                             double dt) {
  if (phi.size() != psi.size()) throw NodeMismatch("gronwall_bound: phi and psi lengths differ");
  for (std::size_t m = 0; m < phi.size(); ++m)
    if (phi[m] < 0.0 || psi[m] < 0.0)
      throw NegativeWeight("gronwall_bound: negative sample at node " + std::to_string(m));
  const auto ip = cumulative(phi, dt), is = cumulative(psi, dt);
  GronwallBound out;
  for (std::size_t m = 0; m < phi.size(); ++m) {
    const double e = std::exp(ip[m]);
    out.a_form.push_back(e * (eta0 + is[m]));
    out.b_form.push_back((eta0 + is[m]) * e);
  }
  for (std::size_t m = 0; m < phi.size(); ++m)
    if (std::abs(out.a_form[m] - out.b_form[m]) > 1e-12 * std::abs(out.a_form[m]))
      throw InvalidConstants("gronwall_bound: (a) and (b) forms disagree at node " + std::to_string(m));
  return out;
}

StabilityReport difference_energy(const Trajectory& a, const Trajectory& b) {
  if (a.grid()->n() != b.grid()->n() || a.grid()->box_length() != b.grid()->box_length())
    throw GridMismatch("difference_energy: runs live on different grids");
  const auto na = unique_nodes(a), nb = unique_nodes(b);
  if (na.size() != nb.size() || a.params.dt != b.params.dt)
    throw NodeMismatch("difference_energy: runs have different nodes");
  for (std::size_t i = 0; i < na.size(); ++i)
    if (std::abs(na[i].t - nb[i].t) > 1e-12) throw NodeMismatch("difference_energy: node times differ");

  StabilityReport r;
  const double dt = a.params.dt;
  for (std::size_t i = 0; i < na.size(); ++i) {
    const Window& wa = a.windows[na[i].window];
    const Window& wb = b.windows[nb[i].window];
    const VectorField om = wa.total_v(na[i].m) - wb.total_v(nb[i].m);
    const VectorField ps = wa.total_h(na[i].m) - wb.total_h(nb[i].m);
    StabilityRow row;
    row.t = na[i].t;
    row.d = std::pow(l2_norm(om), 2) + std::pow(l2_norm(ps), 2);
    row.dissipation = std::pow(sobolev_seminorm(om, 1.0), 2) + std::pow(sobolev_seminorm(ps, 1.0), 2);
    const double s = na[i].t - a.t0();
    row.g1 = std::pow(lp_norm(heat_flow(a.v0(), s), 5.0), 5);
    row.g2 = std::pow(lp_norm(heat_flow(a.h0(), s), 5.0), 5);
    r.rows.push_back(row);
  }
  std::vector<double> g(r.rows.size());
  for (std::size_t m = 0; m < g.size(); ++m) g[m] = r.rows[m].g1 + r.rows[m].g2;
  const auto big_g = cumulative(g, dt);
  const double d0 = r.rows.front().d;
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    r.sup_d = std::max(r.sup_d, r.rows[m].d);
    if (d0 > kEnergyFloor && r.rows[m].d > kEnergyFloor && big_g[m] > 0.0) {
      num += big_g[m] * std::log(r.rows[m].d / d0);
      den += big_g[m] * big_g[m];
    }
  }
  r.c_hat = den > 0.0 ? num / den : 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) {
    r.rows[m].envelope = d0 * std::exp(r.c_hat * big_g[m]);
    if (r.rows[m].envelope > 0.0) r.k = std::max(r.k, r.rows[m].d / r.rows[m].envelope);
    else if (r.rows[m].d > 0.0) r.k = std::numeric_limits<double>::infinity();
  }
  return r;
}

VectorField stability_perturbation(const GridPtr& grid, std::uint64_t seed) {
  const VectorField p = random_divfree_field(grid, seed, 1.0, 1.0);
  return (1.0 / lp_norm(p, 3.0)) * p;
}

StabilityVerdict stability_experiment(const VectorField& v0, const VectorField& h0, const SchemeParams& params,
                                      const std::vector<double>& deltas, std::uint64_t seed, unsigned jobs) {
  for (double d : deltas)
    if (!(d >= 0.0)) throw ConfigError("stability: delta must be nonnegative");
  const VectorField pert = stability_perturbation(v0.grid_ptr(), seed);
  std::vector<std::function<Trajectory()>> tasks;
  tasks.push_back([&] { return solve(v0, h0, params); });
  tasks.push_back([&] { return solve(v0, h0, params); });
  for (double d : deltas) tasks.push_back([&, d] { return solve(v0 + d * pert, h0, params); });

  std::vector<Trajectory> runs(tasks.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t start = 0; start < tasks.size(); start += width) {
    std::vector<std::future<Trajectory>> batch;
    const std::size_t stop = std::min(tasks.size(), start + width);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, tasks[i]));
    for (std::size_t i = start; i < stop; ++i) runs[i] = batch[i - start].get();
  }

  StabilityVerdict v;
  for (const auto& row : difference_energy(runs[0], runs[1]).rows) v.identical_max = std::max(v.identical_max, row.d);
  v.pass = v.identical_max == 0.0;
  double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    StabilityReport r = difference_energy(runs[i + 2], runs[0]);
    r.delta = deltas[i];
    if (deltas[i] > 0.0) {
      v.pass = v.pass && r.k <= 10.0;
      cmin = std::min(cmin, r.c_hat);
      cmax = std::max(cmax, r.c_hat);
    } else {
      v.pass = v.pass && r.sup_d == 0.0;
    }
    v.reports.push_back(std::move(r));
  }
  if (cmax > cmin) {
    const bool same_sign = (cmin > 0.0) == (cmax > 0.0) && cmin != 0.0 && cmax != 0.0;
    v.c_spread = same_sign ? std::max(std::abs(cmax), std::abs(cmin)) / std::min(std::abs(cmax), std::abs(cmin))
                           : std::numeric_limits<double>::infinity();
  }
  v.pass = v.pass && v.c_spread <= 2.0;
  for (std::size_t i = 0; i < v.reports.size(); ++i)
    for (std::size_t j = i + 1; j < v.reports.size(); ++j) {
      const auto& a = v.reports[i];
      const auto& b = v.reports[j];
      if (a.delta == 0.0 || b.delta == 0.0) continue;
      const double want = (a.delta / b.delta) * (a.delta / b.delta);
      const double got = a.sup_d / b.sup_d;
      v.scaling_error = std::max(v.scaling_error, std::max(got / want, want / got));
    }
  v.pass = v.pass && v.scaling_error <= 2.0;
  return v;
}

std::vector<SmallnessRow> smallness_window(const Trajectory& traj) {
  std::vector<SmallnessRow> out;
  double sv = 0.0, sh = 0.0;
  for (const auto& ref : unique_nodes(traj)) {
    const Window& w = traj.windows[ref.window];
    sv = std::max(sv, lp_norm(w.total_v(ref.m) - traj.v0(), 3.0));
    sh = std::max(sh, lp_norm(w.total_h(ref.m) - traj.h0(), 3.0));
    out.push_back({ref.t, sv, sh});
  }
  return out;
}

}  // namespace l3mhd

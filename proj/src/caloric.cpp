#include "l3mhd/caloric.hpp"

#include <array>
#include <cmath>
#include <string>

#include "l3mhd/errors.hpp"
#include "l3mhd/norms.hpp"
#include "l3mhd/spectral.hpp"

namespace l3mhd {

TimeGrid make_time_grid(double horizon, double dt, double t0) {
  if (!(dt > 0.0)) throw NegativeTime("time step must be positive");
  if (horizon < 0.0) throw NegativeTime("horizon must be nonnegative");
  const double steps = horizon / dt;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw NodeMismatch("horizon " + std::to_string(horizon) + " is not a multiple of dt");
  return make_time_grid_steps(static_cast<std::size_t>(rounded), dt, t0);
}

TimeGrid make_time_grid_steps(std::size_t steps, double dt, double t0) {
  return TimeGrid{t0, dt, steps + 1};
}

bool same_nodes(const TimeGrid& a, const TimeGrid& b) {
  return a.count == b.count && std::abs(a.dt - b.dt) <= 1e-15 * std::abs(a.dt) &&
         std::abs(a.t0 - b.t0) <= 1e-12 * std::max(1.0, std::abs(a.t0));
}

VectorField heat_flow(const VectorField& f, double t) {
  if (t < 0.0) throw NegativeTime("heat_flow: t = " + std::to_string(t));
  VectorField out = f;
  if (t == 0.0) return out;
  const auto k2 = f.grid().k2();
  for (std::size_t i = 0; i < k2.size(); ++i) {
    const double m = std::exp(-t * k2[i]);
    for (int c = 0; c < 3; ++c) out[c][i] *= m;
  }
  return out;
}

CaloricPair caloric_pair(const VectorField& v0, const VectorField& h0, const TimeGrid& nodes) {
  require_same_grid(v0.grid(), h0.grid(), "caloric_pair");
  CaloricPair cal{nodes, v0, h0, {}, {}};
  cal.v1.reserve(nodes.count);
  cal.h1.reserve(nodes.count);
  for (std::size_t m = 0; m < nodes.count; ++m) {
    const double t = static_cast<double>(m) * nodes.dt;
    cal.v1.push_back(heat_flow(v0, t));
    cal.h1.push_back(heat_flow(h0, t));
  }
  return cal;
}

bool caloric_lp_monotone(const CaloricPair& cal, double slack) {
  for (const auto* series : {&cal.v1, &cal.h1}) {
    for (double p : {2.0, 3.0, 4.0, 5.0}) {
      double prev = kInf;
      for (const auto& f : *series) {
        const double cur = lp_norm(f, p);
        if (cur > prev * (1.0 + slack) + 1e-300) return false;
        prev = cur;
      }
    }
  }
  return true;
}

DuhamelWeights duhamel_weights(double lambda, double dt) {
  const double z = lambda * dt;
  DuhamelWeights w;
  w.decay = std::exp(-z);
  // full = int_0^dt e^{-lambda tau} d tau / dt,
  // first = int_0^dt e^{-lambda tau} tau d tau / dt^2
  double full, first;
  if (z < 0.1) {
    // Taylor series; both converge fast for z < 0.1
    full = 0.0;
    first = 0.0;
    double term = 1.0;  // (-z)^j / j!
    for (int j = 0; j < 14; ++j) {
      full += term / (j + 1);
      first += term / (j + 2);
      term *= -z / (j + 1);
    }
  } else {
    full = -std::expm1(-z) / z;
    first = (1.0 - w.decay * (1.0 + z)) / (z * z);
  }
  // tau = dt - s: weight of g_{m+1} is the hat s/dt = 1 - tau/dt
  w.w1 = dt * (full - first);
  w.w0 = dt * first;
  return w;
}

std::vector<VectorField> duhamel(const ForcedTrajectory& f) {
  if (f.g.empty() || f.nodes.count == 0) throw EmptyTrajectory("duhamel: no forcing nodes");
  if (f.g.size() != f.nodes.count) throw NodeMismatch("duhamel: forcing/node count mismatch");
  const GridPtr grid = f.g.front().grid_ptr();
  const Grid& g = *grid;
  for (const auto& x : f.g) require_same_grid(g, x.grid(), "duhamel");

  const auto kx = g.kx(), ky = g.ky(), kz = g.kz(), k2 = g.k2();
  std::vector<DuhamelWeights> weights(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) weights[i] = duhamel_weights(k2[i], f.nodes.dt);

  std::vector<VectorField> out;
  out.reserve(f.g.size());
  out.emplace_back(grid);
  for (std::size_t m = 0; m + 1 < f.g.size(); ++m) {
    VectorField next(grid);
    const VectorField& prev = out.back();
    const VectorField& ga = f.g[m];
    const VectorField& gb = f.g[m + 1];
    for (std::size_t i = 0; i < k2.size(); ++i) {
      const DuhamelWeights& w = weights[i];
      std::array<Complex, 3> a;
      for (int c = 0; c < 3; ++c) a[c] = w.w0 * ga[c][i] + w.w1 * gb[c][i];
      if (k2[i] != 0.0) {
        const Complex dot = (kx[i] * a[0] + ky[i] * a[1] + kz[i] * a[2]) / k2[i];
        a[0] -= kx[i] * dot;
        a[1] -= ky[i] * dot;
        a[2] -= kz[i] * dot;
      }
      for (int c = 0; c < 3; ++c) next[c][i] = w.decay * prev[c][i] + a[c];
    }
    next.set_solenoidal(true);
    out.push_back(std::move(next));
  }
  return out;
}

double hessian_lp_norm(const VectorField& u, double s) {
  const Grid& g = u.grid();
  const std::array<std::span<const double>, 3> k{g.kx(), g.ky(), g.kz()};
  std::vector<double> acc(g.physical_size(), 0.0);
  ScalarField d(u.grid_ptr());
  for (int c = 0; c < 3; ++c) {
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) {
        for (std::size_t i = 0; i < d.coeffs().size(); ++i) d[i] = -k[a][i] * k[b][i] * u[c][i];
        const auto v = d.to_physical();
        const double mult = a == b ? 1.0 : 2.0;
        for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += mult * v[p] * v[p];
      }
    }
  }
  for (auto& x : acc) x = std::sqrt(x);
  return lp_norm_samples(acc, g.cell_volume(), s);
}

StokesSolution stokes_solve(const ForcedTrajectory& f, double l, double s) {
  if (f.g.empty()) throw EmptyTrajectory("stokes_solve: no forcing nodes");
  StokesSolution out;
  out.u = duhamel(f);
  out.grad_p.reserve(f.g.size());
  for (const auto& x : f.g) out.grad_p.push_back(gradient_part(x));

  const std::size_t count = f.g.size();
  const double dt = f.nodes.dt;
  std::vector<double> dtu(count), hess(count), gp(count), forcing(count);
  for (std::size_t m = 0; m < count; ++m) {
    forcing[m] = lp_norm(f.g[m], s);
    gp[m] = lp_norm(out.grad_p[m], s);
    hess[m] = hessian_lp_norm(out.u[m], s);
    if (count < 2) {
      dtu[m] = 0.0;
      continue;
    }
    VectorField diff = m == 0            ? out.u[1] - out.u[0]
                       : m + 1 == count  ? out.u[m] - out.u[m - 1]
                                         : 0.5 * (out.u[m + 1] - out.u[m - 1]);
    dtu[m] = lp_norm(diff, s) / dt;
  }
  const double denom = mixed_norm_series(forcing, dt, l);
  if (denom == 0.0) {
    out.regularity_ratio = 0.0;
    return out;
  }
  out.regularity_ratio = (mixed_norm_series(dtu, dt, l) + mixed_norm_series(hess, dt, l) +
                          mixed_norm_series(gp, dt, l)) /
                         denom;
  return out;
}

}  // namespace l3mhd

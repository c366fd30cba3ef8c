#include "l3mhd/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "l3mhd/calibration.hpp"
#include "l3mhd/errors.hpp"
#include "l3mhd/norms.hpp"

namespace l3mhd {

void SchemeParams::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("scheme.epsilon must be positive");
  if (!(dt > 0.0)) throw ConfigError("scheme.dt must be positive");
  if (!(horizon > dt)) throw ConfigError("scheme.horizon must exceed scheme.dt");
  if (!(picard_tol > 0.0)) throw ConfigError("scheme.picard_tol must be positive");
  if (max_picard_iters == 0) throw ConfigError("scheme.max_iters must be positive");
  const double steps = horizon / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw ConfigError("scheme.horizon must be a whole number of steps");
  if (window_policy == WindowPolicy::fixed) {
    if (!(window_length >= 2 * dt))
      throw ConfigError("scheme.window_length must be at least two steps");
    const double w = window_length / dt;
    if (std::abs(w - std::round(w)) > 1e-9 * w)
      throw ConfigError("scheme.window_length must be a whole number of steps");
  }
}

std::size_t SchemeParams::steps(double span) const {
  return static_cast<std::size_t>(std::llround(span / dt));
}

FieldPath operator+(FieldPath a, const FieldPath& b) {
  if (a.size() != b.size()) throw NodeMismatch("path sizes differ");
  for (std::size_t m = 0; m < a.size(); ++m) {
    a.v[m] += b.v[m];
    a.h[m] += b.h[m];
  }
  return a;
}

FieldPath operator-(FieldPath a, const FieldPath& b) {
  if (a.size() != b.size()) throw NodeMismatch("path sizes differ");
  for (std::size_t m = 0; m < a.size(); ++m) {
    a.v[m] -= b.v[m];
    a.h[m] -= b.h[m];
  }
  return a;
}

FieldPath zero_path(const GridPtr& grid, std::size_t count) {
  FieldPath p;
  p.v.assign(count, VectorField(grid));
  p.h.assign(count, VectorField(grid));
  return p;
}

double xt_norm(const std::vector<VectorField>& u, double dt) {
  if (u.empty()) throw EmptyTrajectory("xt_norm of an empty path");
  double sup = 0.0;
  std::vector<double> grad2(u.size());
  for (std::size_t m = 0; m < u.size(); ++m) {
    sup = std::max(sup, l2_norm(u[m]));
    const double g = sobolev_seminorm(u[m], 1.0);
    grad2[m] = g * g;
  }
  return sup + std::sqrt(trapezoid(grad2, dt));
}

double xt_norm(const FieldPath& p, double dt) { return xt_norm(p.v, dt) + xt_norm(p.h, dt); }

namespace {

void accumulate_pair(const PhysicalVector& av, const PhysicalVector& ah, const PhysicalTensor& gv,
                     const PhysicalTensor& gh, PhysicalVector& out_v, PhysicalVector& out_h) {
  const std::size_t size = av.c[0].size();
  for (int i = 0; i < 3; ++i) {
    auto& ov = out_v.c[i];
    auto& oh = out_h.c[i];
    for (int j = 0; j < 3; ++j) {
      const auto& avj = av.c[j];
      const auto& ahj = ah.c[j];
      const auto& gvij = gv(i, j);
      const auto& ghij = gh(i, j);
      for (std::size_t p = 0; p < size; ++p) {
        ov[p] += avj[p] * gvij[p] - ahj[p] * ghij[p];
        oh[p] += avj[p] * ghij[p] - ahj[p] * gvij[p];
      }
    }
  }
}

double lp_norm_physical(const PhysicalVector& u, double cell_volume, double p) {
  std::vector<double> mag(u.c[0].size());
  for (std::size_t i = 0; i < mag.size(); ++i)
    mag[i] = std::sqrt(u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] + u.c[2][i] * u.c[2][i]);
  return lp_norm_samples(mag, cell_volume, p);
}

PhysicalVector zeros(const Grid& g) {
  PhysicalVector p;
  for (auto& c : p.c) c.assign(g.physical_size(), 0.0);
  return p;
}

std::shared_ptr<const CaloricCache> build_cache(const CaloricPair& cal) {
  auto cache = std::make_shared<CaloricCache>();
  const std::size_t count = cal.v1.size();
  cache->v.reserve(count);
  cache->h.reserve(count);
  cache->gv.reserve(count);
  cache->gh.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    cache->v.push_back(to_physical(cal.v1[m]));
    cache->h.push_back(to_physical(cal.h1[m]));
    cache->gv.push_back(gradient_physical(cal.v1[m]));
    cache->gh.push_back(gradient_physical(cal.h1[m]));
  }
  return cache;
}

void require_path(const SchemeContext& ctx, const FieldPath& p, const char* where) {
  if (p.v.size() != ctx.nodes().count || p.h.size() != ctx.nodes().count)
    throw NodeMismatch(std::string(where) + ": path has " + std::to_string(p.v.size()) +
                       " nodes, window has " + std::to_string(ctx.nodes().count));
  if (!p.v.empty()) {
    require_same_grid(*ctx.grid(), p.v.front().grid(), where);
    require_same_grid(*ctx.grid(), p.h.front().grid(), where);
  }
}

// Duhamel of minus the per-node forcing pair.
FieldPath integrate(const SchemeContext& ctx, std::vector<VectorField> fv,
                    std::vector<VectorField> fh) {
  for (auto& f : fv) f *= -1.0;
  for (auto& f : fh) f *= -1.0;
  FieldPath out;
  out.v = duhamel(ForcedTrajectory{ctx.nodes(), std::move(fv)});
  out.h = duhamel(ForcedTrajectory{ctx.nodes(), std::move(fh)});
  return out;
}

}  // namespace

SchemeContext::SchemeContext(CaloricPair cal, SchemeParams params)
    : cal_(std::move(cal)), params_(params), cache_(build_cache(cal_)) {}

FieldPath assemble_source(const SchemeContext& ctx) {
  const auto& c = ctx.cache();
  const GridPtr& g = ctx.grid();
  std::vector<VectorField> fv, fh;
  for (std::size_t m = 0; m < ctx.nodes().count; ++m) {
    PhysicalVector ov = zeros(*g), oh = zeros(*g);
    accumulate_pair(c.v[m], c.h[m], c.gv[m], c.gh[m], ov, oh);
    fv.push_back(from_physical_dealiased(g, ov));
    fh.push_back(from_physical_dealiased(g, oh));
  }
  return integrate(ctx, std::move(fv), std::move(fh));
}

FieldPath assemble_source(const CaloricPair& cal) {
  return assemble_source(SchemeContext(cal, SchemeParams{}));
}

FieldPath bilinear_apply(const SchemeContext& ctx, const FieldPath& a, const FieldPath& b) {
  require_path(ctx, a, "bilinear_apply");
  require_path(ctx, b, "bilinear_apply");
  const GridPtr& g = ctx.grid();
  const auto& p = ctx.params();
  std::vector<VectorField> fv, fh;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const PhysicalVector av = to_physical(mollify(a.v[m], p.epsilon, p.mollifier));
    const PhysicalVector ah = to_physical(mollify(a.h[m], p.epsilon, p.mollifier));
    const PhysicalTensor gv = gradient_physical(b.v[m]);
    const PhysicalTensor gh = gradient_physical(b.h[m]);
    PhysicalVector ov = zeros(*g), oh = zeros(*g);
    accumulate_pair(av, ah, gv, gh, ov, oh);
    fv.push_back(from_physical_dealiased(g, ov));
    fh.push_back(from_physical_dealiased(g, oh));
  }
  return integrate(ctx, std::move(fv), std::move(fh));
}

FieldPath linear_apply(const SchemeContext& ctx, const FieldPath& a) {
  require_path(ctx, a, "linear_apply");
  const auto& c = ctx.cache();
  const GridPtr& g = ctx.grid();
  std::vector<VectorField> fv, fh;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const PhysicalVector av = to_physical(a.v[m]);
    const PhysicalVector ah = to_physical(a.h[m]);
    const PhysicalTensor gv = gradient_physical(a.v[m]);
    const PhysicalTensor gh = gradient_physical(a.h[m]);
    PhysicalVector ov = zeros(*g), oh = zeros(*g);
    accumulate_pair(av, ah, c.gv[m], c.gh[m], ov, oh);
    accumulate_pair(c.v[m], c.h[m], gv, gh, ov, oh);
    fv.push_back(from_physical_dealiased(g, ov));
    fh.push_back(from_physical_dealiased(g, oh));
  }
  return integrate(ctx, std::move(fv), std::move(fh));
}

std::pair<VectorField, VectorField> nonlinearity(const SchemeContext& ctx, const FieldPath& u,
                                                 std::size_t m) {
  const auto& c = ctx.cache();
  const GridPtr& g = ctx.grid();
  const auto& p = ctx.params();
  const PhysicalVector av = to_physical(u.v[m]);
  const PhysicalVector ah = to_physical(u.h[m]);
  const PhysicalVector mv = to_physical(mollify(u.v[m], p.epsilon, p.mollifier));
  const PhysicalVector mh = to_physical(mollify(u.h[m], p.epsilon, p.mollifier));
  const PhysicalTensor gv = gradient_physical(u.v[m]);
  const PhysicalTensor gh = gradient_physical(u.h[m]);
  PhysicalVector ov = zeros(*g), oh = zeros(*g);
  accumulate_pair(mv, mh, gv, gh, ov, oh);
  accumulate_pair(av, ah, c.gv[m], c.gh[m], ov, oh);
  accumulate_pair(c.v[m], c.h[m], gv, gh, ov, oh);
  accumulate_pair(c.v[m], c.h[m], c.gv[m], c.gh[m], ov, oh);
  return {from_physical_dealiased(g, ov), from_physical_dealiased(g, oh)};
}

double mollifier_sup_factor(const Grid& grid, double epsilon, MollifierKind kind) {
  const auto kx = grid.kx(), ky = grid.ky(), kz = grid.kz();
  const auto mask = grid.mask();
  const auto weight = grid.weight();
  const auto k2 = grid.k2();
  double sum = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i] || k2[i] == 0.0) continue;
    const double s = mollifier_symbol(kind, epsilon, kx[i], ky[i], kz[i]);
    sum += weight[i] * s * s;
  }
  return std::sqrt(sum) / std::pow(grid.box_length(), 1.5);
}

double mollifier_constant(const Grid& grid, MollifierKind kind) {
  // sup of e^{3/2} S(e) on a log grid over (L/1000, L], padded by 1%
  const double L = grid.box_length();
  double best = 0.0;
  const int samples = 400;
  for (int i = 0; i <= samples; ++i) {
    const double e = L * std::pow(10.0, -3.0 + 3.0 * i / samples);
    best = std::max(best, std::pow(e, 1.5) * mollifier_sup_factor(grid, e, kind));
  }
  return 1.01 * best;
}

SchemeConstants estimate_constants(const SchemeContext& ctx, const FieldPath& source) {
  const auto& p = ctx.params();
  const Grid& g = *ctx.grid();
  const TimeGrid& nodes = ctx.nodes();
  const double T = nodes.horizon() - nodes.t0;
  SchemeConstants k;
  k.duhamel_constant = kDuhamelConstant;
  k.mollifier_constant = mollifier_constant(g, p.mollifier);
  // valid beyond the sampled range too: the exact factor at epsilon is never exceeded
  const double eta = std::max(k.mollifier_constant * std::pow(p.epsilon, -1.5),
                              mollifier_sup_factor(g, p.epsilon, p.mollifier));
  k.c1 = k.duhamel_constant * std::sqrt(T) * eta;
  k.interpolation_constant = calibration_for(g).interpolation;
  std::vector<double> v5(nodes.count), h5(nodes.count);
  for (std::size_t m = 0; m < nodes.count; ++m) {
    v5[m] = lp_norm_physical(ctx.cache().v[m], g.cell_volume(), 5.0);
    h5[m] = lp_norm_physical(ctx.cache().h[m], g.cell_volume(), 5.0);
  }
  k.l5_v1 = mixed_norm_series(v5, nodes.dt, 5.0);
  k.l5_h1 = mixed_norm_series(h5, nodes.dt, 5.0);
  k.c2 = 2.0 * k.duhamel_constant * k.interpolation_constant * (k.l5_v1 + k.l5_h1);
  k.r_norm = xt_norm(source, nodes.dt);
  return k;
}

SchemeConstants estimate_constants(const CaloricPair& cal, const SchemeParams& params) {
  SchemeContext ctx(cal, params);
  return estimate_constants(ctx, assemble_source(ctx));
}

QuadraticProblem<FieldPath> make_problem(const SchemeContext& ctx, const FieldPath& source,
                                         const SchemeConstants& k) {
  QuadraticProblem<FieldPath> p;
  const double dt = ctx.nodes().dt;
  p.norm = [dt](const FieldPath& u) { return xt_norm(u, dt); };
  p.bilinear = [&ctx](const FieldPath& a, const FieldPath& b) { return bilinear_apply(ctx, a, b); };
  p.linear = [&ctx](const FieldPath& a) { return linear_apply(ctx, a); };
  p.source = source;
  p.zero = zero_path(ctx.grid(), ctx.nodes().count);
  p.c1 = k.c1;
  p.c2 = k.c2;
  p.r_norm = k.r_norm;
  return p;
}

std::vector<FieldPath> constant_probes(const GridPtr& grid, std::size_t count, std::size_t probes) {
  std::vector<FieldPath> out;
  const double span = std::max<double>(1.0, static_cast<double>(count - 1));
  for (std::size_t k = 0; k < probes; ++k) {
    const std::uint64_t seed = 0x5eed0000u + 4 * k;
    const VectorField a = random_divfree_field(grid, seed, 1.0, 1.0 + 0.5 * k);
    const VectorField b = random_divfree_field(grid, seed + 1, 1.0, 1.5);
    const VectorField c = random_divfree_field(grid, seed + 2, 1.0, 0.75 + k);
    const VectorField d = random_divfree_field(grid, seed + 3, 1.0, 2.0);
    FieldPath p;
    for (std::size_t m = 0; m < count; ++m) {
      const double s = m / span;
      p.v.push_back(s * a + std::sin(3.0 * s) * b);
      p.h.push_back((1.0 - s) * c + s * s * d);
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

constexpr std::size_t kProbeCount = 2;

Window attempt(const VectorField& v0, const VectorField& h0, const SchemeParams& params, double t0,
               std::size_t steps, bool& ok) {
  Window w;
  w.ctx = std::make_shared<SchemeContext>(caloric_pair(v0, h0, make_time_grid_steps(steps, params.dt, t0)),
                                          params);
  const FieldPath source = assemble_source(*w.ctx);
  w.constants = estimate_constants(*w.ctx, source);
  ok = w.constants.c2 < 1.0 && check_condition(w.constants.c1, w.constants.c2, w.constants.r_norm).ok;
  w.pert = source;
  return w;
}

}  // namespace

Window solve_window(const VectorField& v0, const VectorField& h0, const SchemeParams& params,
                    double t0, std::size_t max_steps) {
  params.validate();
  require_same_grid(v0.grid(), h0.grid(), "solve_window");
  std::size_t steps = max_steps;
  std::vector<std::size_t> rejected;
  Window w;
  for (;;) {
    if (steps < 2)
      throw WindowCollapse("no window of at least two steps satisfies (1 - c2)^2 > 4 c1 |R| (tried " +
                           std::to_string(rejected.size()) + " windows from t = " +
                           std::to_string(t0) + ")");
    bool ok = false;
    w = attempt(v0, h0, params, t0, steps, ok);
    if (ok) break;
    rejected.push_back(steps);
    if (params.window_policy == WindowPolicy::fixed)
      throw WindowCollapse("fixed window of " + std::to_string(steps) +
                           " steps violates the contraction condition: c1 = " +
                           std::to_string(w.constants.c1) + ", c2 = " +
                           std::to_string(w.constants.c2) + ", |R| = " +
                           std::to_string(w.constants.r_norm));
    steps /= 2;
  }
  w.rejected_steps = std::move(rejected);

  const FieldPath source = std::move(w.pert);
  auto problem = make_problem(*w.ctx, source, w.constants);
  validate_constants(problem, constant_probes(w.ctx->grid(), w.ctx->nodes().count, kProbeCount));
  w.pert = solve(problem, params.picard_tol, params.max_picard_iters, w.cert);
  return w;
}

Trajectory solve_window(const VectorField& v0, const VectorField& h0, const SchemeParams& params) {
  params.validate();
  std::size_t steps = params.steps(params.horizon);
  if (params.window_policy == WindowPolicy::fixed)
    steps = std::min(steps, params.steps(params.window_length));
  Trajectory traj;
  traj.params = params;
  traj.windows.push_back(solve_window(v0, h0, params, 0.0, steps));
  return traj;
}

double Trajectory::t0() const { return windows.empty() ? 0.0 : windows.front().nodes().t0; }

double Trajectory::horizon() const {
  return windows.empty() ? 0.0 : windows.back().nodes().horizon();
}

const GridPtr& Trajectory::grid() const {
  if (windows.empty()) throw EmptyTrajectory("trajectory has no windows");
  return windows.front().ctx->grid();
}

std::size_t Trajectory::node_count() const {
  std::size_t n = 0;
  for (const auto& w : windows) n += w.nodes().count;
  return n;
}

Trajectory extend(Trajectory traj, double new_horizon) {
  if (traj.windows.empty()) throw EmptyTrajectory("extend of an empty trajectory");
  const auto& p = traj.params;
  const double current = traj.horizon();
  if (new_horizon < current - 1e-12 * std::max(1.0, current))
    throw NegativeTime("extend: new horizon " + std::to_string(new_horizon) + " before " +
                       std::to_string(current));
  const double steps_d = (new_horizon - traj.t0()) / p.dt;
  if (std::abs(steps_d - std::round(steps_d)) > 1e-9 * std::max(1.0, steps_d))
    throw NodeMismatch("extend: horizon is not a whole number of steps");
  const std::size_t target = static_cast<std::size_t>(std::llround(steps_d));
  auto done = [&] {
    return static_cast<std::size_t>(std::llround((traj.horizon() - traj.t0()) / p.dt));
  };
  while (done() < target) {
    const Window& last = traj.windows.back();
    const std::size_t end = last.nodes().count - 1;
    const VectorField v = last.total_v(end);
    const VectorField h = last.total_h(end);
    std::size_t steps = target - done();
    if (p.window_policy == WindowPolicy::fixed) steps = std::min(steps, p.steps(p.window_length));
    Window next = solve_window(v, h, p, last.nodes().horizon(), steps);
    traj.windows.push_back(std::move(next));
  }
  return traj;
}

Trajectory solve(const VectorField& v0, const VectorField& h0, const SchemeParams& params) {
  return extend(solve_window(v0, h0, params), params.horizon);
}

ScalarField recover_pressure(const VectorField& v2, const VectorField& h2, const VectorField& v1,
                             const VectorField& h1) {
  require_same_grid(v2.grid(), v1.grid(), "recover_pressure");
  require_same_grid(h2.grid(), h1.grid(), "recover_pressure");
  require_same_grid(v2.grid(), h2.grid(), "recover_pressure");
  const VectorField v = v1 + v2, h = h1 + h2;
  const TensorField nv = outer(v, v), nh = outer(h, h);
  const Grid& g = v.grid();
  const std::array<std::span<const double>, 3> k{g.kx(), g.ky(), g.kz()};
  const auto k2 = g.k2();
  ScalarField pi(v.grid_ptr());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    if (k2[i] == 0.0) continue;
    Complex acc = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) acc += k[a][i] * k[b][i] * (nv(a, b)[i] - nh(a, b)[i]);
    pi[i] = -acc / k2[i];
  }
  return pi;
}

ScalarField recover_pressure(const MhdState& state, const CaloricPair& cal, std::size_t m) {
  if (m >= cal.v1.size()) throw NodeMismatch("recover_pressure: node out of range");
  return recover_pressure(state.v2, state.h2, cal.v1[m], cal.h1[m]);
}

double pressure_poisson_residual(const ScalarField& pi, const VectorField& v, const VectorField& h) {
  const TensorField nv = outer(v, v), nh = outer(h, h);
  const Grid& g = v.grid();
  const std::array<std::span<const double>, 3> k{g.kx(), g.ky(), g.kz()};
  const auto k2 = g.k2();
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < k2.size(); ++i) {
    Complex dd = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) dd += k[a][i] * k[b][i] * (nv(a, b)[i] - nh(a, b)[i]);
    // Lap Pi = -d_i d_j N_ij reads -k^2 Pi = k_i k_j N_ij
    worst = std::max(worst, std::abs(-k2[i] * pi[i] - dd));
    scale = std::max(scale, std::abs(dd));
  }
  return scale == 0.0 ? worst : worst / scale;
}

ScalarField pressure_from_forcing(const VectorField& f) {
  const Grid& g = f.grid();
  const auto kx = g.kx(), ky = g.ky(), kz = g.kz(), k2 = g.k2();
  ScalarField p(f.grid_ptr());
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < k2.size(); ++i) {
    if (k2[i] == 0.0) continue;
    p[i] = -I * (kx[i] * f[0][i] + ky[i] * f[1][i] + kz[i] * f[2][i]) / k2[i];
  }
  return p;
}

PressureDecomposition pressure_decompose(const Trajectory& traj, std::size_t window) {
  if (window >= traj.windows.size()) throw NodeMismatch("pressure_decompose: no such window");
  const Window& w = traj.windows[window];
  const auto& cal = w.cal();
  const std::size_t count = w.nodes().count;
  PressureDecomposition out;
  out.nodes = w.nodes();
  out.exponents = {{{1.5, 9.0 / 8.0}, {1.5, 4.0 / 3.0}, {1.5, 6.0 / 5.0}, {1.5, 1.5}}};
  std::array<std::vector<VectorField>, 4> forcing;
  std::vector<double> mismatch(count), scale(count);
  for (std::size_t m = 0; m < count; ++m) {
    const VectorField& v1 = cal.v1[m];
    const VectorField& h1 = cal.h1[m];
    const VectorField& v2 = w.pert.v[m];
    const VectorField& h2 = w.pert.h[m];
    forcing[0].push_back(advect(h2, h2) - advect(v2, v2));
    forcing[1].push_back(advect(h2, h1) - advect(v2, v1));
    forcing[2].push_back(advect(h1, h2) - advect(v1, v2));
    forcing[3].push_back(advect(h1, h1) - advect(v1, v1));
    VectorField sum(w.ctx->grid());
    for (int i = 0; i < 4; ++i) {
      out.parts[i].push_back(pressure_from_forcing(forcing[i][m]));
      out.grads[i].push_back(gradient_part(forcing[i][m]));
      sum += out.grads[i].back();
    }
    out.total.push_back(recover_pressure(v2, h2, v1, h1));
    const VectorField grad_total = gradient(out.total.back());
    mismatch[m] = lp_norm(grad_total - sum, 9.0 / 8.0);
    scale[m] = lp_norm(grad_total, 9.0 / 8.0);
  }
  const double denom = mixed_norm_series(scale, w.nodes().dt, 1.5);
  const double num = mixed_norm_series(mismatch, w.nodes().dt, 1.5);
  out.gradient_mismatch = denom == 0.0 ? num : num / denom;
  for (int i = 0; i < 4; ++i) {
    ForcedTrajectory f{w.nodes(), std::move(forcing[i])};
    out.regularity[i] = stokes_solve(f, out.exponents[i].first, out.exponents[i].second).regularity_ratio;
  }
  return out;
}

double momentum_residual(const Window& w) {
  const auto& ctx = *w.ctx;
  const std::size_t count = w.nodes().count;
  const double dt = w.nodes().dt;
  double worst = 0.0;
  std::pair<VectorField, VectorField> prev = nonlinearity(ctx, w.pert, 0);
  for (std::size_t m = 0; m + 1 < count; ++m) {
    auto next = nonlinearity(ctx, w.pert, m + 1);
    for (int c = 0; c < 2; ++c) {
      const auto& u = c == 0 ? w.pert.v : w.pert.h;
      const VectorField& na = c == 0 ? prev.first : prev.second;
      const VectorField& nb = c == 0 ? next.first : next.second;
      VectorField r = (1.0 / dt) * (u[m + 1] - u[m]);
      VectorField lap(ctx.grid());
      const VectorField mid = 0.5 * (u[m] + u[m + 1]);
      for (int d = 0; d < 3; ++d) lap[d] = laplacian(mid[d]);
      r -= lap;
      r += leray_project(0.5 * (na + nb));
      worst = std::max(worst, l2_norm(r));
    }
    prev = std::move(next);
  }
  return worst;
}

double time_derivative_dual_norm(const Window& w) {
  const std::size_t count = w.nodes().count;
  const double dt = w.nodes().dt;
  std::vector<double> sq(count - 1);
  for (std::size_t m = 0; m + 1 < count; ++m) {
    const double a = sobolev_seminorm((1.0 / dt) * (w.pert.v[m + 1] - w.pert.v[m]), -1.5);
    const double b = sobolev_seminorm((1.0 / dt) * (w.pert.h[m + 1] - w.pert.h[m]), -1.5);
    sq[m] = a * a + b * b;
  }
  return std::sqrt(std::accumulate(sq.begin(), sq.end(), 0.0) * dt);
}

}  // namespace l3mhd

#include "l3mhd/app.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "l3mhd/calibration.hpp"
#include "l3mhd/errors.hpp"
#include "l3mhd/io.hpp"
#include "l3mhd/norms.hpp"
#include "l3mhd/uniqueness.hpp"
#include "l3mhd/verify.hpp"

namespace l3mhd {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { line(header); }
  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(format_double(v));
    line(cells);
  }
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += "\n";
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void note(const CommandContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << "\n";
}

std::pair<VectorField, VectorField> initial_fields(const RunConfig& c) { return initial_data(c.make_grid(), c.initial); }

json certificate_summary(const Window& w) {
  const auto& c = w.cert;
  return {{"t0", w.nodes().t0},
          {"t_end", w.nodes().horizon()},
          {"steps", w.nodes().steps()},
          {"c1", c.c1},
          {"c2", c.c2},
          {"r_norm", c.r_norm},
          {"x1", c.x1},
          {"gamma", c.gamma},
          {"iterations", c.iterations},
          {"final_residual", c.final_residual},
          {"within_ball", c.within_ball},
          {"rejected_steps", w.rejected_steps}};
}

struct AuditOutcome {
  std::string name;
  json summary;
  std::map<std::string, std::string> files;
  bool pass = true;
};

template <class Task>
std::vector<AuditOutcome> run_tasks(const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<AuditOutcome> out(tasks.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t start = 0; start < tasks.size(); start += width) {
    std::vector<std::future<AuditOutcome>> batch;
    const std::size_t stop = std::min(tasks.size(), start + width);
    for (std::size_t i = start; i < stop; ++i)
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, tasks[i]));
    for (std::size_t i = start; i < stop; ++i) out[i] = batch[i - start].get();
  }
  return out;
}

AuditOutcome audit_global(const Trajectory& traj, double tol) {
  AuditOutcome o;
  o.name = "global_energy";
  const EnergyReport r = global_energy_audit(traj, tol);
  Csv csv({"t", "E_v2", "E_H2", "Diss_v2", "Diss_H2", "lhs_global", "rhs_global", "residual_global", "L3_v", "L3_H",
           "picard_iters"});
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& n = r.nodes[i];
    if (n.window > 0 && i > 0 && r.nodes[i - 1].window != n.window) continue;
    const auto& row = r.rows[i];
    csv.row({row.t, n.e_v2, n.e_h2, n.diss_v2, n.diss_h2, row.lhs, row.rhs, row.residual, n.l3_v, n.l3_h,
             static_cast<double>(n.picard_iters)});
  }
  o.files["run.csv"] = csv.text();
  o.summary = {{"pass", r.pass},
               {"min_residual", r.min_residual},
               {"max_abs_residual", r.max_abs_residual},
               {"max_step_residual", r.max_step_residual},
               {"aggregate", r.aggregate},
               {"tolerance", r.tolerance}};
  o.pass = r.pass;
  return o;
}

AuditOutcome audit_local(const Trajectory& traj, double tol) {
  AuditOutcome o;
  o.name = "local_energy";
  Csv csv({"window", "t", "lhs", "rhs", "residual"});
  json windows = json::array();
  for (std::size_t w = 0; w < traj.windows.size(); ++w) {
    if (traj.windows[w].nodes().steps() < 4) continue;
    const TestFunction phi = preset_test_function(traj, w);
    const EnergyReport r = local_energy_audit(traj, phi, tol);
    for (const auto& row : r.rows) csv.row({static_cast<double>(w), row.t, row.lhs, row.rhs, row.residual});
    windows.push_back({{"window", w},
                       {"test_function", r.test_function},
                       {"pass", r.pass},
                       {"min_residual", r.min_residual},
                       {"max_abs_residual", r.max_abs_residual},
                       {"tolerance", r.tolerance}});
    o.pass = o.pass && r.pass;
  }
  if (windows.empty()) o.pass = false;
  o.files["local_energy.csv"] = csv.text();
  o.summary = {{"pass", o.pass}, {"windows", windows}};
  if (windows.empty()) o.summary["reason"] = "no window has four steps for the time bump";
  return o;
}

AuditOutcome audit_caloric(const Trajectory& traj) {
  AuditOutcome o;
  o.name = "caloric_bounds";
  const CaloricBoundsReport r = caloric_bounds_audit(traj.windows.front().cal());
  o.summary = {{"pass", r.pass},
               {"l3_data", r.l3_data},
               {"linf_l3", r.linf_l3},
               {"l5_l5", r.l5_l5},
               {"l8_l4", r.l8_l4},
               {"linf_contraction", r.linf_contraction},
               {"l5_within", r.l5_within},
               {"l8_within", r.l8_within},
               {"attainment", r.attainment},
               {"attainment_bound", r.attainment_bound}};
  o.pass = r.pass;
  return o;
}

AuditOutcome audit_apriori(const Trajectory& traj) {
  AuditOutcome o;
  o.name = "apriori";
  const AprioriReport r = apriori_audit(traj);
  Csv csv({"horizon", "energy_ratio", "xt_ratio"});
  for (const auto& row : r.rows) csv.row({row.horizon, row.energy_ratio, row.xt_ratio});
  o.files["apriori.csv"] = csv.text();
  o.summary = {{"pass", r.pass}, {"energy_spread", r.energy_spread}, {"xt_spread", r.xt_spread}};
  o.pass = r.pass;
  return o;
}

AuditOutcome audit_nonlinear(const Trajectory& traj) {
  AuditOutcome o;
  o.name = "nonlinear";
  const NonlinearReport r = nonlinear_norm_audit(traj);
  Csv csv({"l", "s", "ratio_v2", "ratio_H2", "constant", "pass"});
  for (const auto& row : r.rows) csv.row({row.l, row.s, row.ratio_v, row.ratio_h, row.constant, row.pass ? 1.0 : 0.0});
  o.files["nonlinear.csv"] = csv.text();
  o.summary = {{"pass", r.pass}};
  o.pass = r.pass;
  return o;
}

AuditOutcome audit_oscillation(const Trajectory& traj) {
  AuditOutcome o;
  o.name = "oscillation";
  Csv csv({"window", "part", "radius", "lhs", "rhs", "ratio", "max_box_ratio", "constant", "pass"});
  double worst = 0.0;
  for (std::size_t w = 0; w < traj.windows.size(); ++w) {
    const OscillationReport r = oscillation_audit(pressure_decompose(traj, w), std::vector<double>{});
    for (const auto& row : r.rows) {
      csv.row({static_cast<double>(w), static_cast<double>(row.part), row.radius, row.lhs, row.rhs, row.ratio,
               row.max_box_ratio, row.constant, row.pass ? 1.0 : 0.0});
      if (row.constant > 0.0) worst = std::max(worst, row.ratio / row.constant);
    }
    o.pass = o.pass && r.pass;
  }
  o.files["oscillation.csv"] = csv.text();
  o.summary = {{"pass", o.pass}, {"worst_ratio_over_constant", worst}};
  return o;
}

AuditOutcome audit_pressure(const Trajectory& traj) {
  AuditOutcome o;
  o.name = "pressure";
  Csv csv({"window", "poisson_residual", "gradient_mismatch", "regularity_1", "regularity_2", "regularity_3",
           "regularity_4"});
  double poisson = 0.0, mismatch = 0.0;
  for (std::size_t w = 0; w < traj.windows.size(); ++w) {
    const Window& win = traj.windows[w];
    double worst = 0.0;
    for (std::size_t m = 0; m < win.nodes().count; ++m) {
      const ScalarField pi = recover_pressure(win.pert.v[m], win.pert.h[m], win.cal().v1[m], win.cal().h1[m]);
      worst = std::max(worst, pressure_poisson_residual(pi, win.total_v(m), win.total_h(m)));
    }
    const PressureDecomposition d = pressure_decompose(traj, w);
    csv.row({static_cast<double>(w), worst, d.gradient_mismatch, d.regularity[0], d.regularity[1], d.regularity[2],
             d.regularity[3]});
    poisson = std::max(poisson, worst);
    mismatch = std::max(mismatch, d.gradient_mismatch);
  }
  o.files["pressure.csv"] = csv.text();
  o.pass = poisson <= 1e-10 && mismatch <= 1e-8;
  o.summary = {{"pass", o.pass}, {"poisson_residual", poisson}, {"gradient_mismatch", mismatch}};
  return o;
}

AuditOutcome audit_sweep(const Trajectory& traj, const RunConfig& c) {
  AuditOutcome o;
  o.name = "epsilon_sweep";
  const SweepReport r = epsilon_sweep(traj.v0(), traj.h0(), c.scheme);
  Csv csv({"epsilon", "distance"});
  for (const auto& row : r.rows) csv.row({row.epsilon, row.distance});
  o.files["epsilon_sweep.csv"] = csv.text();
  o.summary = {{"pass", r.pass}};
  o.pass = r.pass;
  return o;
}

std::string norms_csv(const Trajectory& traj) {
  const NormLedger led = norm_ledger(traj);
  std::vector<std::string> header{"t"};
  for (const char* f : NormLedger::fields)
    for (const char* t : NormLedger::tags) header.push_back(std::string(f) + "_" + t);
  Csv csv(header);
  for (std::size_t i = 0; i < led.t.size(); ++i) {
    std::vector<double> row{led.t[i]};
    for (const auto& f : led.values[i])
      for (double x : f) row.push_back(x);
    csv.row(row);
  }
  return csv.text();
}

struct AuditSet {
  json summary = json::object();
  json timings = json::object();
  std::map<std::string, std::string> files;
  bool pass = true;
};

AuditSet run_audits(const Trajectory& traj, const RunConfig& c, unsigned jobs) {
  std::vector<AuditRequest> requests = c.audits;
  if (requests.empty())
    for (const auto& name : default_audits()) requests.push_back({name, -1.0});
  std::vector<std::function<AuditOutcome()>> tasks;
  for (const auto& req : requests) {
    tasks.push_back([&traj, &c, req] {
      const auto t = Clock::now();
      AuditOutcome o;
      if (req.name == "global_energy") o = audit_global(traj, req.tolerance);
      else if (req.name == "local_energy") o = audit_local(traj, req.tolerance);
      else if (req.name == "caloric_bounds") o = audit_caloric(traj);
      else if (req.name == "apriori") o = audit_apriori(traj);
      else if (req.name == "nonlinear") o = audit_nonlinear(traj);
      else if (req.name == "oscillation") o = audit_oscillation(traj);
      else if (req.name == "pressure") o = audit_pressure(traj);
      else if (req.name == "epsilon_sweep") o = audit_sweep(traj, c);
      else throw ConfigError("unknown audit '" + req.name + "'");
      o.summary["seconds"] = seconds_since(t);
      return o;
    });
  }
  AuditSet out;
  for (auto& o : run_tasks(tasks, jobs)) {
    out.timings[o.name] = o.summary["seconds"];
    o.summary.erase("seconds");
    out.summary[o.name] = o.summary;
    out.pass = out.pass && o.pass;
    for (auto& [k, v] : o.files) out.files[k] = std::move(v);
  }
  out.files["norms.csv"] = norms_csv(traj);
  return out;
}

json run_summary(const Trajectory& traj, const RunConfig& c, const AuditSet& audits) {
  const CalibrationTable& cal = calibration_for(*traj.grid());
  json windows = json::array();
  for (const auto& w : traj.windows) windows.push_back(certificate_summary(w));
  return {{"version", kVersion},
          {"calibration_hash", calibration_hash(cal)},
          {"calibration_frozen", cal.frozen},
          {"config", json::parse(config_json(c))},
          {"windows", windows},
          {"audits", audits.summary},
          {"pass", audits.pass}};
}

void write_outputs(const fs::path& dir, const AuditSet& audits, const json& summary, const json& timings,
                   const std::string& summary_name) {
  for (const auto& [name, text] : audits.files) atomic_write(dir / name, text);
  atomic_write(dir / summary_name, summary.dump(2) + "\n");
  atomic_write(dir / ("timings_" + summary_name), timings.dump(2) + "\n");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

FieldPath subsample(const FieldPath& p, std::size_t stride) {
  FieldPath out;
  for (std::size_t m = 0; m < p.size(); m += stride) {
    out.v.push_back(p.v[m]);
    out.h.push_back(p.h[m]);
  }
  return out;
}

FieldPath resample_path(const FieldPath& p, const GridPtr& g) {
  FieldPath out;
  for (std::size_t m = 0; m < p.size(); ++m) {
    out.v.push_back(resample(p.v[m], g));
    out.h.push_back(resample(p.h[m], g));
  }
  return out;
}

}  // namespace

SweepTable run_sweep(const RunConfig& c, unsigned jobs) {
  SweepTable table;
  table.dimension = c.sweep_dimension;
  std::vector<double> levels = c.sweep_levels;
  if (c.sweep_dimension == "epsilon") {
    const auto [v0, h0] = initial_fields(c);
    const SweepReport r = epsilon_sweep(v0, h0, c.scheme, levels);
    for (const auto& row : r.rows) table.levels.push_back({row.epsilon, row.distance, 0.0});
    table.pass = r.pass;
    return table;
  }
  if (c.sweep_dimension == "dt") {
    if (levels.empty()) levels = {c.scheme.dt, c.scheme.dt / 2, c.scheme.dt / 4};
    const double coarse = *std::max_element(levels.begin(), levels.end());
    const auto [v0, h0] = initial_fields(c);
    std::vector<std::function<FieldPath()>> tasks;
    std::vector<std::size_t> strides;
    for (double dt : levels) {
      const double s = coarse / dt;
      if (std::abs(s - std::round(s)) > 1e-9) throw ConfigError("sweep.levels: dt levels must divide the coarsest");
      strides.push_back(static_cast<std::size_t>(std::llround(s)));
      SchemeParams p = c.scheme;
      p.dt = dt;
      p.validate();
      tasks.push_back([v0 = v0, h0 = h0, p] { return global_perturbation(solve(v0, h0, p)); });
    }
    std::vector<FieldPath> paths(tasks.size());
    {
      std::vector<std::future<FieldPath>> fut;
      for (std::size_t start = 0; start < tasks.size(); start += std::max(1u, jobs)) {
        fut.clear();
        const std::size_t stop = std::min(tasks.size(), start + std::max(1u, jobs));
        for (std::size_t i = start; i < stop; ++i)
          fut.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, tasks[i]));
        for (std::size_t i = start; i < stop; ++i) paths[i] = subsample(fut[i - start].get(), strides[i]);
      }
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      SweepLevel l{levels[i], 0.0, 0.0};
      if (i + 1 < levels.size()) l.distance = path_distance(paths[i], paths[i + 1], coarse);
      table.levels.push_back(l);
    }
    for (std::size_t i = 0; i + 2 < levels.size(); ++i) {
      const double a = table.levels[i].distance, b = table.levels[i + 1].distance;
      table.levels[i].order = (a > 0.0 && b > 0.0) ? std::log(a / b) / std::log(levels[i] / levels[i + 1]) : 0.0;
      const bool zero = a == 0.0 && b == 0.0;
      table.pass = table.pass && (zero || table.levels[i].order >= 1.7);
    }
    return table;
  }
  // n
  std::vector<int> ns;
  if (levels.empty()) ns = {c.n, c.n + c.n / 2, 2 * c.n};
  for (double l : levels) {
    if (l != std::floor(l)) throw ConfigError("sweep.levels: grid sizes must be integers");
    ns.push_back(static_cast<int>(l));
  }
  const int coarse = *std::min_element(ns.begin(), ns.end());
  RunConfig base = c;
  base.n = coarse;
  const auto [v0, h0] = initial_fields(base);
  std::vector<GridPtr> grids;
  std::vector<FieldPath> paths;
  for (int n : ns) {
    RunConfig lc = c;
    lc.n = n;
    lc.validate();
    const GridPtr g = lc.make_grid();
    grids.push_back(g);
    paths.push_back(global_perturbation(solve(resample(v0, g), resample(h0, g), c.scheme)));
  }
  for (std::size_t i = 0; i < ns.size(); ++i) {
    SweepLevel l{static_cast<double>(ns[i]), 0.0, 0.0};
    if (i + 1 < ns.size()) {
      const GridPtr& fine = ns[i] >= ns[i + 1] ? grids[i] : grids[i + 1];
      l.distance = path_distance(resample_path(paths[i], fine), resample_path(paths[i + 1], fine), c.scheme.dt);
    }
    table.levels.push_back(l);
  }
  for (std::size_t i = 0; i + 2 < ns.size(); ++i)
    table.pass = table.pass && table.levels[i + 1].distance <= table.levels[i].distance;
  return table;
}

int command_run(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  fs::create_directories(ctx.out_dir);
  const auto t0 = Clock::now();
  const auto [v0, h0] = initial_fields(c);
  const Trajectory traj = solve(v0, h0, c.scheme);
  const double solve_s = seconds_since(t0);
  note(ctx, "solved " + std::to_string(traj.windows.size()) + " window(s) in " + format_double(solve_s) + " s");
  const auto t1 = Clock::now();
  export_trajectory(traj, ctx.out_dir / "trajectory");
  const double export_s = seconds_since(t1);
  const AuditSet audits = run_audits(traj, c, ctx.jobs);
  json timings = {{"solve", solve_s}, {"export", export_s}, {"audits", audits.timings}};
  write_outputs(ctx.out_dir, audits, run_summary(traj, c, audits), timings, "summary.json");
  for (const auto& [name, s] : audits.summary.items())
    note(ctx, name + ": " + (s.at("pass").get<bool>() ? "PASS" : "FAIL"));
  return audits.pass ? kExitOk : kExitAuditFailed;
}

int command_verify(const CommandContext& ctx) {
  const fs::path dir = ctx.out_dir / "trajectory";
  if (!fs::exists(dir / "manifest.json")) throw ConfigError("no exported trajectory in " + dir.string());
  const Trajectory traj = import_trajectory(dir);
  const AuditSet audits = run_audits(traj, ctx.config, ctx.jobs);
  write_outputs(ctx.out_dir / "verify", audits, run_summary(traj, ctx.config, audits), {{"audits", audits.timings}},
                "summary.json");
  for (const auto& [name, s] : audits.summary.items())
    note(ctx, name + ": " + (s.at("pass").get<bool>() ? "PASS" : "FAIL"));
  return audits.pass ? kExitOk : kExitAuditFailed;
}

int command_sweep(const CommandContext& ctx) {
  const auto t = Clock::now();
  const SweepTable table = run_sweep(ctx.config, ctx.jobs);
  Csv csv({"level", "distance", "order"});
  json rows = json::array();
  for (const auto& l : table.levels) {
    csv.row({l.level, l.distance, l.order});
    rows.push_back({{"level", l.level}, {"distance", l.distance}, {"order", l.order}});
  }
  atomic_write(ctx.out_dir / "sweep.csv", csv.text());
  atomic_write(ctx.out_dir / "sweep.json",
               json{{"version", kVersion}, {"dimension", table.dimension}, {"levels", rows}, {"pass", table.pass}}
                       .dump(2) +
                   "\n");
  atomic_write(ctx.out_dir / "timings_sweep.json", json{{"sweep", seconds_since(t)}}.dump(2) + "\n");
  note(ctx, table.dimension + " sweep: " + (table.pass ? "PASS" : "FAIL"));
  return table.pass ? kExitOk : kExitAuditFailed;
}

int command_stability(const CommandContext& ctx) {
  const RunConfig& c = ctx.config;
  const fs::path dir = ctx.out_dir / "trajectory";
  if (!fs::exists(dir / "manifest.json"))
    throw ConfigError("missing baseline run: no trajectory in " + dir.string() + " (run `l3mhd run` first)");
  const Trajectory baseline = import_trajectory(dir);
  const GridPtr g = c.make_grid();
  if (baseline.grid()->n() != g->n() || baseline.grid()->box_length() != g->box_length() ||
      baseline.params.dt != c.scheme.dt || baseline.params.horizon != c.scheme.horizon)
    throw ConfigError("baseline run in " + dir.string() + " was made with a different grid or time grid");
  const auto t = Clock::now();
  const auto [v0, h0] = initial_fields(c);
  const StabilityVerdict v = stability_experiment(v0, h0, c.scheme, c.stability_deltas, c.stability_seed, ctx.jobs);
  json reports = json::array();
  for (std::size_t i = 0; i < v.reports.size(); ++i) {
    const auto& r = v.reports[i];
    Csv csv({"t", "D", "dissipation", "g1", "g2", "envelope"});
    for (const auto& row : r.rows) csv.row({row.t, row.d, row.dissipation, row.g1, row.g2, row.envelope});
    const std::string name = "stability_" + std::to_string(i) + ".csv";
    atomic_write(ctx.out_dir / name, csv.text());
    reports.push_back({{"delta", r.delta}, {"c_hat", r.c_hat}, {"K", r.k}, {"sup_D", r.sup_d}, {"csv", name}});
  }
  Csv small({"T1", "sup_v_minus_v0_L3", "sup_H_minus_h0_L3"});
  for (const auto& row : smallness_window(baseline)) small.row({row.t1, row.sup_v, row.sup_h});
  atomic_write(ctx.out_dir / "smallness.csv", small.text());
  atomic_write(ctx.out_dir / "stability.json", json{{"version", kVersion},
                                                    {"identical_max_D", v.identical_max},
                                                    {"c_hat_spread", v.c_spread},
                                                    {"sup_D_scaling_error", v.scaling_error},
                                                    {"reports", reports},
                                                    {"pass", v.pass}}
                                                       .dump(2) +
                                                   "\n");
  atomic_write(ctx.out_dir / "timings_stability.json", json{{"stability", seconds_since(t)}}.dump(2) + "\n");
  note(ctx, std::string("stability: ") + (v.pass ? "PASS" : "FAIL"));
  return v.pass ? kExitOk : kExitAuditFailed;
}

int command_report(const CommandContext& ctx) {
  std::ostringstream os;
  bool any = false, pass = true;
  const auto section = [&](const fs::path& path, const std::string& title, auto&& body) {
    if (!fs::exists(path)) return;
    any = true;
    const json j = read_json(path);
    os << "== " << title << " (" << path.filename().string() << ")\n";
    body(j);
    const bool p = j.value("pass", false);
    pass = pass && p;
    os << "overall: " << (p ? "PASS" : "FAIL") << "\n\n";
  };
  const auto audits = [&](const json& j) {
    os << "version " << j.value("version", "?") << ", calibration " << j.value("calibration_hash", "?") << "\n";
    for (const auto& w : j.at("windows"))
      os << "window [" << format_double(w.at("t0")) << ", " << format_double(w.at("t_end"))
         << "]: c1=" << format_double(w.at("c1")) << " c2=" << format_double(w.at("c2"))
         << " |R|=" << format_double(w.at("r_norm")) << " x1=" << format_double(w.at("x1"))
         << " iterations=" << w.at("iterations") << "\n";
    for (const auto& [name, a] : j.at("audits").items())
      os << "  " << name << ": " << (a.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
  };
  section(ctx.out_dir / "summary.json", "run", audits);
  section(ctx.out_dir / "verify" / "summary.json", "verify", audits);
  section(ctx.out_dir / "sweep.json", "sweep", [&](const json& j) {
    os << "dimension " << j.at("dimension").get<std::string>() << "\n";
    for (const auto& l : j.at("levels"))
      os << "  level " << format_double(l.at("level")) << " distance " << format_double(l.at("distance"))
         << " order " << format_double(l.at("order")) << "\n";
  });
  section(ctx.out_dir / "stability.json", "stability", [&](const json& j) {
    for (const auto& r : j.at("reports"))
      os << "  delta " << format_double(r.at("delta")) << " C=" << format_double(r.at("c_hat"))
         << " K=" << format_double(r.at("K")) << " supD=" << format_double(r.at("sup_D")) << "\n";
  });
  if (!any) throw ConfigError("nothing to report in " + ctx.out_dir.string());
  atomic_write(ctx.out_dir / "report.txt", os.str());
  if (ctx.log) *ctx.log << os.str();
  return pass ? kExitOk : kExitAuditFailed;
}

}  // namespace l3mhd

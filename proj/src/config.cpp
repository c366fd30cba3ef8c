#include "l3mhd/config.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "l3mhd/errors.hpp"

extern char** environ;

namespace l3mhd {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"grid", {"n", "box_length"}},
      {"scheme",
       {"epsilon", "dt", "horizon", "picard_tol", "max_iters", "window_policy", "window_length", "mollifier_kind",
        "dealias"}},
      {"initial", {"preset", "seed", "amplitude", "decay"}},
      {"audits", {}},
      {"output", {"dir"}},
      {"sweep", {"dimension", "levels"}},
      {"stability", {"deltas", "seed"}},
  };
  return s;
}

template <class T>
T take(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": wrong type (" + std::string(j.type_name()) + ")");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::uint64_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>()))
    throw ConfigError(where + ": expected an integer");
  if (j.get<double>() < 0) throw ConfigError(where + ": expected a nonnegative integer");
  return j.is_number_unsigned() ? j.get<std::uint64_t>() : static_cast<std::uint64_t>(j.get<double>());
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

RunConfig from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config root must be an object");
  for (const auto& [section, body] : root.items()) {
    auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown key '" + section + "'");
    if (section == "audits") continue;
    if (!body.is_object()) throw ConfigError(section + ": expected an object");
    for (const auto& [key, _] : body.items())
      if (!it->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
  }

  RunConfig c;
  if (root.contains("grid")) {
    const json& g = root["grid"];
    if (g.contains("n")) c.n = static_cast<int>(count(g["n"], "grid.n"));
    if (g.contains("box_length")) c.box_length = number(g["box_length"], "grid.box_length");
  }
  if (root.contains("scheme")) {
    const json& s = root["scheme"];
    SchemeParams& p = c.scheme;
    if (s.contains("epsilon")) p.epsilon = number(s["epsilon"], "scheme.epsilon");
    if (s.contains("dt")) p.dt = number(s["dt"], "scheme.dt");
    if (s.contains("horizon")) p.horizon = number(s["horizon"], "scheme.horizon");
    if (s.contains("picard_tol")) p.picard_tol = number(s["picard_tol"], "scheme.picard_tol");
    if (s.contains("max_iters")) p.max_picard_iters = count(s["max_iters"], "scheme.max_iters");
    if (s.contains("window_policy")) {
      const auto w = take<std::string>(s["window_policy"], "scheme.window_policy");
      if (w == "automatic") p.window_policy = WindowPolicy::automatic;
      else if (w == "fixed") p.window_policy = WindowPolicy::fixed;
      else throw ConfigError("scheme.window_policy: expected 'automatic' or 'fixed', got '" + w + "'");
    }
    if (s.contains("window_length")) p.window_length = number(s["window_length"], "scheme.window_length");
    if (s.contains("mollifier_kind")) p.mollifier = parse_mollifier(take<std::string>(s["mollifier_kind"], "scheme.mollifier_kind"));
    if (s.contains("dealias")) c.dealias = take<bool>(s["dealias"], "scheme.dealias");
  }
  if (root.contains("initial")) {
    const json& i = root["initial"];
    if (i.contains("preset")) c.initial.preset = parse_preset(take<std::string>(i["preset"], "initial.preset"));
    if (i.contains("seed")) c.initial.seed = count(i["seed"], "initial.seed");
    if (i.contains("amplitude")) c.initial.amplitude = number(i["amplitude"], "initial.amplitude");
    if (i.contains("decay")) c.initial.decay = number(i["decay"], "initial.decay");
  }
  if (root.contains("audits")) {
    const json& a = root["audits"];
    if (!a.is_array()) throw ConfigError("audits: expected a list");
    for (const auto& item : a) {
      AuditRequest r;
      if (item.is_string()) {
        r.name = item.get<std::string>();
      } else if (item.is_object()) {
        for (const auto& [key, _] : item.items())
          if (key != "name" && key != "tolerance") throw ConfigError("unknown key 'audits[]." + key + "'");
        if (!item.contains("name")) throw ConfigError("audits[]: missing name");
        r.name = take<std::string>(item["name"], "audits[].name");
        if (item.contains("tolerance")) r.tolerance = number(item["tolerance"], "audits[].tolerance");
      } else {
        throw ConfigError("audits[]: expected a name or an object");
      }
      c.audits.push_back(r);
    }
  }
  if (root.contains("output") && root["output"].contains("dir"))
    c.output_dir = take<std::string>(root["output"]["dir"], "output.dir");
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    if (s.contains("dimension")) c.sweep_dimension = take<std::string>(s["dimension"], "sweep.dimension");
    if (s.contains("levels")) c.sweep_levels = numbers(s["levels"], "sweep.levels");
  }
  if (root.contains("stability")) {
    const json& s = root["stability"];
    if (s.contains("deltas")) c.stability_deltas = numbers(s["deltas"], "stability.deltas");
    if (s.contains("seed")) c.stability_seed = count(s["seed"], "stability.seed");
  }
  c.validate();
  return c;
}

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& known_audits() {
  static const std::vector<std::string> k{"global_energy", "local_energy", "caloric_bounds", "apriori",
                                          "nonlinear",     "oscillation",  "pressure",       "epsilon_sweep"};
  return k;
}

const std::vector<std::string>& default_audits() {
  static const std::vector<std::string> d{"global_energy", "local_energy", "caloric_bounds",
                                          "nonlinear",     "oscillation",  "pressure"};
  return d;
}

void RunConfig::validate() const {
  if (n < 4 || n % 2 != 0) throw ConfigError("grid.n must be an even integer >= 4, got " + std::to_string(n));
  if (n > 256) throw ConfigError("grid.n above 256 is outside the supported desk scale");
  if (box_length < 0.0 || !std::isfinite(box_length)) throw ConfigError("grid.box_length must be positive");
  scheme.validate();
  if (!(initial.amplitude >= 0.0) || !std::isfinite(initial.amplitude))
    throw ConfigError("initial.amplitude must be nonnegative");
  if (!(initial.decay > 0.0)) throw ConfigError("initial.decay must be positive");
  for (const auto& a : audits) {
    bool ok = false;
    for (const auto& k : known_audits()) ok = ok || k == a.name;
    if (!ok) throw ConfigError("unknown audit '" + a.name + "'");
  }
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
  if (sweep_dimension != "epsilon" && sweep_dimension != "dt" && sweep_dimension != "n")
    throw ConfigError("sweep.dimension must be epsilon, dt or n");
  if (!sweep_levels.empty() && sweep_levels.size() < 3) throw ConfigError("sweep.levels needs at least 3 levels");
  for (double l : sweep_levels)
    if (!(l > 0.0)) throw ConfigError("sweep.levels must be positive");
  for (double d : stability_deltas)
    if (!(d >= 0.0)) throw ConfigError("stability.deltas must be nonnegative");
}

GridPtr RunConfig::make_grid() const {
  return l3mhd::make_grid(n, box_length > 0.0 ? box_length : 2 * std::numbers::pi, dealias);
}

RunConfig parse_config(const std::string& text) { return from_json(parse_json(text, "config")); }

std::map<std::string, std::string> l3mhd_environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv = *e;
    const auto eq = kv.find('=');
    if (eq != std::string::npos && kv.rfind("L3MHD_", 0) == 0) out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

RunConfig load_config(const std::filesystem::path& path, const std::map<std::string, std::string>& env) {
  json root = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    root = parse_json(ss.str(), path.string());
    if (!root.is_object()) throw ConfigError(path.string() + ": config root must be an object");
  }
  for (const auto& [name, value] : env) {
    if (name.rfind("L3MHD_", 0) != 0 || name == "L3MHD_JOBS") continue;
    std::string rest = name.substr(6);
    for (char& ch : rest) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const auto us = rest.find('_');
    if (us == std::string::npos) throw ConfigError("environment override " + name + " names no key");
    const std::string section = rest.substr(0, us), key = rest.substr(us + 1);
    if (!schema().count(section) || section == "audits")
      throw ConfigError("environment override " + name + ": unknown section '" + section + "'");
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::exception&) {
      parsed = value;
    }
    if (!root.contains(section)) root[section] = json::object();
    root[section][key] = parsed;
  }
  return from_json(root);
}

std::string config_json(const RunConfig& c) {
  json audits = json::array();
  for (const auto& a : c.audits) audits.push_back({{"name", a.name}, {"tolerance", a.tolerance}});
  const json j{
      {"grid", {{"n", c.n}, {"box_length", c.box_length > 0.0 ? c.box_length : 2 * std::numbers::pi}}},
      {"scheme",
       {{"epsilon", c.scheme.epsilon},
        {"dt", c.scheme.dt},
        {"horizon", c.scheme.horizon},
        {"picard_tol", c.scheme.picard_tol},
        {"max_iters", c.scheme.max_picard_iters},
        {"window_policy", c.scheme.window_policy == WindowPolicy::fixed ? "fixed" : "automatic"},
        {"window_length", c.scheme.window_length},
        {"mollifier_kind", mollifier_name(c.scheme.mollifier)},
        {"dealias", c.dealias}}},
      {"initial",
       {{"preset", preset_name(c.initial.preset)},
        {"seed", c.initial.seed},
        {"amplitude", c.initial.amplitude},
        {"decay", c.initial.decay}}},
      {"audits", audits},
      {"output", {{"dir", c.output_dir}}},
      {"sweep", {{"dimension", c.sweep_dimension}, {"levels", c.sweep_levels}}},
      {"stability", {{"deltas", c.stability_deltas}, {"seed", c.stability_seed}}},
  };
  return j.dump(2);
}

}  // namespace l3mhd

#include "l3mhd/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "l3mhd/errors.hpp"

namespace l3mhd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'L', '3', 'M', 'H', 'D', 'S', 'N', 'P'};

template <class T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos, const fs::path& path) {
  if (pos + sizeof(T) > in.size()) throw FormatError(path.string() + ": truncated snapshot");
  char buf[sizeof(T)];
  std::memcpy(buf, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string encode_snapshot(const std::vector<VectorField>& fields, Representation rep) {
  if (fields.empty()) throw EmptyTrajectory("snapshot without fields");
  const Grid& g = fields.front().grid();
  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put<double>(out, g.box_length());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(3 * fields.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(rep));
  for (const auto& f : fields) {
    if (f.grid_ptr() != fields.front().grid_ptr() && (f.grid().n() != g.n() || f.grid().box_length() != g.box_length()))
      throw GridMismatch("snapshot fields live on different grids");
    for (int c = 0; c < 3; ++c) {
      if (rep == Representation::physical) {
        for (double x : f[c].to_physical()) put<double>(out, x);
      } else {
        for (const Complex& z : f[c].coeffs()) {
          put<double>(out, z.real());
          put<double>(out, z.imag());
        }
      }
    }
  }
  return out;
}

json certificate_json(const FixedPointCertificate& c) {
  return {{"c1", c.c1},
          {"c2", c.c2},
          {"r_norm", c.r_norm},
          {"x1", c.x1},
          {"x2", c.x2},
          {"gamma", c.gamma},
          {"iterations", c.iterations},
          {"final_residual", c.final_residual},
          {"residuals", c.residuals},
          {"max_iterate_norm", c.max_iterate_norm},
          {"within_ball", c.within_ball}};
}

FixedPointCertificate certificate_from(const json& j) {
  FixedPointCertificate c;
  c.c1 = j.at("c1");
  c.c2 = j.at("c2");
  c.r_norm = j.at("r_norm");
  c.x1 = j.at("x1");
  c.x2 = j.at("x2");
  c.gamma = j.at("gamma");
  c.iterations = j.at("iterations");
  c.final_residual = j.at("final_residual");
  c.residuals = j.at("residuals").get<std::vector<double>>();
  c.max_iterate_norm = j.at("max_iterate_norm");
  c.within_ball = j.at("within_ball");
  return c;
}

json constants_json(const SchemeConstants& k) {
  return {{"c1", k.c1},
          {"c2", k.c2},
          {"r_norm", k.r_norm},
          {"duhamel_constant", k.duhamel_constant},
          {"mollifier_constant", k.mollifier_constant},
          {"interpolation_constant", k.interpolation_constant},
          {"l5_v1", k.l5_v1},
          {"l5_h1", k.l5_h1}};
}

SchemeConstants constants_from(const json& j) {
  SchemeConstants k;
  k.c1 = j.at("c1");
  k.c2 = j.at("c2");
  k.r_norm = j.at("r_norm");
  k.duhamel_constant = j.at("duhamel_constant");
  k.mollifier_constant = j.at("mollifier_constant");
  k.interpolation_constant = j.at("interpolation_constant");
  k.l5_v1 = j.at("l5_v1");
  k.l5_h1 = j.at("l5_h1");
  return k;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw FormatError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_snapshot(const fs::path& path, const std::vector<VectorField>& fields, Representation rep) {
  atomic_write(path, encode_snapshot(fields, rep));
}

Snapshot read_snapshot(const fs::path& path, GridPtr grid) {
  const std::string in = read_file(path);
  if (in.size() < sizeof kMagic || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0)
    throw FormatError(path.string() + ": not a field snapshot");
  std::size_t pos = sizeof kMagic;
  const auto version = get<std::uint32_t>(in, pos, path);
  if (version != kSnapshotVersion)
    throw FormatError(path.string() + ": unsupported snapshot version " + std::to_string(version));
  const auto n = static_cast<int>(get<std::uint32_t>(in, pos, path));
  const double L = get<double>(in, pos, path);
  const auto components = get<std::uint32_t>(in, pos, path);
  const auto rep = get<std::uint32_t>(in, pos, path);
  if (rep > 1) throw FormatError(path.string() + ": unknown representation tag " + std::to_string(rep));
  if (components == 0 || components % 3 != 0)
    throw FormatError(path.string() + ": component count " + std::to_string(components) + " is not a multiple of 3");
  if (grid) {
    if (grid->n() != n || grid->box_length() != L)
      throw GridMismatch(path.string() + ": snapshot grid differs from the expected grid");
  } else {
    try {
      grid = make_grid(n, L);
    } catch (const InvalidGrid& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }
  Snapshot s;
  s.grid = grid;
  s.rep = static_cast<Representation>(rep);
  const std::size_t per = s.rep == Representation::physical ? grid->physical_size() : 2 * grid->spectral_size();
  if (in.size() != pos + components * per * sizeof(double))
    throw FormatError(path.string() + ": payload size does not match the header");
  std::vector<ScalarField> comps;
  for (std::uint32_t c = 0; c < components; ++c) {
    if (s.rep == Representation::physical) {
      std::vector<double> values(per);
      for (double& x : values) x = get<double>(in, pos, path);
      comps.push_back(ScalarField::from_physical(grid, values));
    } else {
      std::vector<Complex> coeffs(grid->spectral_size());
      for (Complex& z : coeffs) {
        const double re = get<double>(in, pos, path);
        z = Complex(re, get<double>(in, pos, path));
      }
      comps.emplace_back(grid, std::move(coeffs));
    }
  }
  for (std::size_t i = 0; i < comps.size(); i += 3) s.fields.emplace_back(comps[i], comps[i + 1], comps[i + 2]);
  return s;
}

void export_trajectory(const Trajectory& traj, const fs::path& dir, Representation rep) {
  fs::create_directories(dir);
  const SchemeParams& p = traj.params;
  json manifest;
  manifest["format"] = "l3mhd-trajectory";
  manifest["version"] = 1;
  manifest["representation"] = rep == Representation::physical ? "physical" : "spectral";
  manifest["grid"] = {{"n", traj.grid()->n()}, {"box_length", traj.grid()->box_length()},
                      {"dealias", traj.grid()->dealias()}};
  manifest["params"] = {{"epsilon", p.epsilon},
                        {"horizon", p.horizon},
                        {"dt", p.dt},
                        {"picard_tol", p.picard_tol},
                        {"max_picard_iters", p.max_picard_iters},
                        {"window_policy", p.window_policy == WindowPolicy::fixed ? "fixed" : "automatic"},
                        {"window_length", p.window_length},
                        {"mollifier", mollifier_name(p.mollifier)}};
  json windows = json::array();
  for (std::size_t w = 0; w < traj.windows.size(); ++w) {
    const Window& win = traj.windows[w];
    json files = json::array();
    for (std::size_t m = 0; m < win.nodes().count; ++m) {
      char name[64];
      std::snprintf(name, sizeof name, "w%03zu_m%05zu.snp", w, m);
      const std::string bytes =
          encode_snapshot({win.cal().v1[m], win.cal().h1[m], win.pert.v[m], win.pert.h[m]}, rep);
      atomic_write(dir / name, bytes);
      files.push_back({{"name", name}, {"t", win.nodes().time(m)}, {"fnv1a", fnv1a_hex(bytes)}});
    }
    windows.push_back({{"t0", win.nodes().t0},
                       {"dt", win.nodes().dt},
                       {"count", win.nodes().count},
                       {"certificate", certificate_json(win.cert)},
                       {"constants", constants_json(win.constants)},
                       {"rejected_steps", win.rejected_steps},
                       {"files", files}});
  }
  manifest["windows"] = windows;
  atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
}

Trajectory import_trajectory(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw FormatError((dir / "manifest.json").string() + ": " + e.what());
  }
  try {
    Trajectory traj;
    const json& jp = manifest.at("params");
    SchemeParams& p = traj.params;
    p.epsilon = jp.at("epsilon");
    p.horizon = jp.at("horizon");
    p.dt = jp.at("dt");
    p.picard_tol = jp.at("picard_tol");
    p.max_picard_iters = jp.at("max_picard_iters");
    p.window_policy = jp.at("window_policy") == "fixed" ? WindowPolicy::fixed : WindowPolicy::automatic;
    p.window_length = jp.at("window_length");
    p.mollifier = parse_mollifier(jp.at("mollifier"));
    const json& jg = manifest.at("grid");
    const GridPtr grid = make_grid(jg.at("n"), jg.at("box_length"), jg.at("dealias"));
    for (const json& jw : manifest.at("windows")) {
      const json& files = jw.at("files");
      const std::size_t count = jw.at("count");
      if (files.size() != count || count == 0) throw FormatError("manifest window lists the wrong number of files");
      FieldPath pert;
      VectorField v0(grid), h0(grid);
      for (std::size_t m = 0; m < count; ++m) {
        const fs::path file = dir / files[m].at("name").get<std::string>();
        const std::string bytes = read_file(file);
        if (fnv1a_hex(bytes) != files[m].at("fnv1a").get<std::string>())
          throw FormatError(file.string() + ": checksum mismatch");
        Snapshot s = read_snapshot(file, grid);
        if (s.fields.size() != 4) throw FormatError(file.string() + ": expected four vector fields");
        if (m == 0) {
          v0 = s.fields[0];
          h0 = s.fields[1];
        }
        pert.v.push_back(s.fields[2]);
        pert.h.push_back(s.fields[3]);
      }
      const TimeGrid nodes = make_time_grid_steps(count - 1, jw.at("dt"), jw.at("t0"));
      Window win;
      win.ctx = std::make_shared<SchemeContext>(caloric_pair(v0, h0, nodes), p);
      win.pert = std::move(pert);
      win.cert = certificate_from(jw.at("certificate"));
      win.constants = constants_from(jw.at("constants"));
      win.rejected_steps = jw.at("rejected_steps").get<std::vector<std::size_t>>();
      traj.windows.push_back(std::move(win));
    }
    if (traj.windows.empty()) throw FormatError("manifest lists no windows");
    return traj;
  } catch (const json::exception& e) {
    throw FormatError((dir / "manifest.json").string() + ": " + e.what());
  }
}

}  // namespace l3mhd

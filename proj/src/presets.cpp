#include "l3mhd/presets.hpp"

#include <cmath>
#include <numbers>

#include "l3mhd/errors.hpp"
#include "l3mhd/spectral.hpp"

namespace l3mhd {

Preset parse_preset(const std::string& name) {
  if (name == "taylor_green") return Preset::taylor_green;
  if (name == "elsasser_aligned") return Preset::elsasser_aligned;
  if (name == "random") return Preset::random;
  throw ConfigError("unknown preset '" + name + "'");
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::taylor_green: return "taylor_green";
    case Preset::elsasser_aligned: return "elsasser_aligned";
    case Preset::random: return "random";
  }
  return "?";
}

namespace {

VectorField sample(const GridPtr& g, double amplitude, double shift) {
  const int n = g->n();
  const double h = 2 * std::numbers::pi / n;
  std::vector<double> x(g->physical_size()), y(x.size()), z(x.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double a = i * h + shift, b = j * h + shift, c = k * h + shift;
        const std::size_t p = g->physical_index(i, j, k);
        x[p] = amplitude * std::sin(a) * std::cos(b) * std::cos(c);
        y[p] = -amplitude * std::cos(a) * std::sin(b) * std::cos(c);
        z[p] = 0.0;
      }
  VectorField u = VectorField::from_physical(g, x, y, z);
  // exact trigonometric polynomial: clean roundoff off the solenoidal modes
  u = leray_project(dealias(u));
  return u;
}

}  // namespace

VectorField taylor_green(const GridPtr& grid, double amplitude) { return sample(grid, amplitude, 0.0); }

std::pair<VectorField, VectorField> initial_data(const GridPtr& grid, const InitialSpec& spec) {
  switch (spec.preset) {
    case Preset::taylor_green:
      return {sample(grid, spec.amplitude, 0.0), sample(grid, 0.5 * spec.amplitude, std::numbers::pi / 2)};
    case Preset::elsasser_aligned: {
      VectorField v = sample(grid, spec.amplitude, 0.0);
      return {v, v};
    }
    case Preset::random:
      if (spec.amplitude == 0.0) return {VectorField(grid), VectorField(grid)};
      return {random_divfree_field(grid, spec.seed, spec.amplitude, spec.decay),
              random_divfree_field(grid, spec.seed + 1, spec.amplitude, spec.decay)};
  }
  throw ConfigError("unknown preset");
}

}  // namespace l3mhd

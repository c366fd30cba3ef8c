#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "l3mhd/field.hpp"

namespace l3mhd {

enum class Preset { taylor_green, elsasser_aligned, random };

struct InitialSpec {
  Preset preset = Preset::taylor_green;
  std::uint64_t seed = 1;
  double amplitude = 0.1;
  double decay = 1.0;
};

Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

/// Taylor-Green velocity amplitude * (sin x cos y cos z, -cos x sin y cos z, 0)
/// in box-scaled coordinates.
VectorField taylor_green(const GridPtr& grid, double amplitude);

/// (v0, h0) for a preset. taylor_green pairs v0 with half its copy shifted by
/// a quarter period in every direction; elsasser_aligned sets h0 = v0;
/// random draws both from random_divfree_field (seeds s and s + 1).
std::pair<VectorField, VectorField> initial_data(const GridPtr& grid, const InitialSpec& spec);

}  // namespace l3mhd

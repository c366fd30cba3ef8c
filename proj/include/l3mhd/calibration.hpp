#pragma once

#include <array>
#include <string>
#include <vector>

#include "l3mhd/field.hpp"

namespace l3mhd {

/// Grid-dependent constants standing in for the existential C's of the
/// estimates. Values carry their safety margin.
struct CalibrationTable {
  int n = 0;
  double box_length = 0.0;
  /// ||f||_{10/3} <= C ||f||_2^{2/5} ||grad f||_2^{3/5} for mean-free f.
  double interpolation = 0.0;
  /// t^{5/8} ||grad e^{t Lap} v0||_4 <= C ||v0||_3 for t in [0.01, 1].
  double heat_gradient_decay = 0.0;
  /// ||e^{t Lap} v0||_{L5L5(0,1)} <= C ||v0||_3 and the L8L4 analogue.
  double caloric_l5l5 = 0.0;
  double caloric_l8l4 = 0.0;
  /// ||u.grad u||_{L^l L^s} <= C (||u||_{LinfL2} + ||grad u||_{L2L2})^2 for the
  /// pairs (3/2, 9/8), (2, 1), (1, 3/2).
  std::array<double, 3> nonlinear{};
  /// Oscillation-to-bound ratio per pressure part.
  std::array<double, 4> oscillation{};
  /// Frozen table (true) or fitted on the fly with borrowed audit constants.
  bool frozen = false;
};

inline constexpr double kInterpolationMargin = 1.25;
inline constexpr double kCalibrationMargin = 2.0;

/// Frozen table for (n, L) in {16, 32} x {2 pi}; other grids get a table
/// fitted at first use, audit constants borrowed from the nearest frozen grid.
const CalibrationTable& calibration_for(const Grid& grid);
const std::vector<CalibrationTable>& frozen_calibrations();
/// Short hex digest of every constant in the table.
std::string calibration_hash(const CalibrationTable& t);

/// Fields used to fit the analytic constants: random solenoidal fields of
/// several decay rates, single modes and band-limited peaks.
std::vector<VectorField> calibration_probes(const GridPtr& grid);

/// Raw sups over calibration_probes (no margin).
double fit_interpolation_constant(const GridPtr& grid);
double fit_heat_gradient_decay(const GridPtr& grid);
std::array<double, 2> fit_caloric_constants(const GridPtr& grid);

/// ||f||_{10/3} / (||f||_2^{2/5} ||grad f||_2^{3/5}).
double interpolation_ratio(const VectorField& f);

}  // namespace l3mhd

// Prints the raw constants of the frozen calibration table for one grid.
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "l3mhd/calibration.hpp"
#include "l3mhd/verify.hpp"

using namespace l3mhd;

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 16;
  const double L = argc > 2 ? std::atof(argv[2]) : 2 * std::numbers::pi;
  const auto grid = make_grid(n, L);
  std::printf("n %d box_length %.17g\n", n, L);
  std::printf("interpolation %.17g\n", fit_interpolation_constant(grid));
  std::printf("heat_gradient_decay %.17g\n", fit_heat_gradient_decay(grid));
  const auto cal = fit_caloric_constants(grid);
  std::printf("caloric_l5l5 %.17g\ncaloric_l8l4 %.17g\n", cal[0], cal[1]);
  const AuditFit fit = fit_audit_constants(grid);
  for (double x : fit.nonlinear) std::printf("nonlinear %.17g\n", x);
  for (double x : fit.oscillation) std::printf("oscillation %.17g\n", x);
  return 0;
}

#pragma once

#include "oschalf/extension.hpp"
#include "oschalf/hermite.hpp"

namespace oschalf {

/// Box [-L, L]^N x [0, Y] sampled by the composite trapezoid rule.
struct StripGrid {
  double half_width = 8.0;
  double height = 12.0;
  int x_points = 2001;
  int y_points = 24001;
};

/// grad_y, grad_x and potential of the Poisson lift, integrated on a
/// uniform box grid from pointwise Hermite values. Boundary terms are zero.
EnergyBreakdown strip_energy_quadrature(const SpectralField& trace, const StripGrid& grid = {});

/// Largest relative difference over grad_y, grad_x and potential.
double max_relative_difference(const EnergyBreakdown& a, const EnergyBreakdown& b);

}  // namespace oschalf

#pragma once

#include <vector>

namespace oschalf {

/// Gauss-Legendre rule on [-1, 1].
struct LegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

LegendreRule gauss_legendre(int order);

/// Composite Gauss-Legendre over consecutive breakpoints, nodes ascending.
LegendreRule composite_legendre(const std::vector<double>& breaks, int order);

/// Breakpoints 0, h_min, h_min q, ..., up to `end`, with the last interval
/// absorbed so the final point is exactly `end`.
std::vector<double> geometric_breaks(double h_min, double ratio, double end);

}  // namespace oschalf

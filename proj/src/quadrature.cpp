#include "oschalf/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace oschalf {

LegendreRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  LegendreRule rule;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double v = es.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * v * v;
  }
  for (int i = 0; i < order / 2; ++i) {
    const double x = 0.5 * (rule.nodes[order - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[order - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

LegendreRule composite_legendre(const std::vector<double>& breaks, int order) {
  const LegendreRule base = gauss_legendre(order);
  LegendreRule rule;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

std::vector<double> geometric_breaks(double h_min, double ratio, double end) {
  if (!(h_min > 0.0) || !(ratio > 1.0) || !(end > h_min))
    throw std::invalid_argument("geometric_breaks: need 0 < h_min < end and ratio > 1");
  std::vector<double> b{0.0, h_min};
  double h = h_min;
  while (b.back() + h * ratio < end) {
    h *= ratio;
    b.push_back(b.back() + h);
  }
  if (end - b.back() < 0.5 * h && b.size() > 2) b.back() = end;
  else b.push_back(end);
  return b;
}

}  // namespace oschalf

#include "oschalf/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "oschalf/oscillator.hpp"

namespace oschalf {

namespace {

double trapezoid_weight(int i, int n, double h) { return (i == 0 || i == n - 1) ? 0.5 * h : h; }

// w^T (M_0 x ... x M_{N-1}) w with M = special on special_axis and gram elsewhere.
double tensor_form(const Eigen::VectorXd& w, int dim, int extent, const Eigen::MatrixXd& gram,
                   const Eigen::MatrixXd& special, int special_axis) {
  Eigen::VectorXd t = w;
  std::vector<int> shape(dim, extent);
  for (int axis = 0; axis < dim; ++axis) {
    t = apply_along_axis(t, shape, axis, axis == special_axis ? special : gram);
  }
  return w.dot(t);
}

}  // namespace

EnergyBreakdown strip_energy_quadrature(const SpectralField& trace, const StripGrid& grid) {
  if (grid.x_points < 3 || grid.y_points < 3 || grid.half_width <= 0.0 || grid.height <= 0.0) {
    throw std::invalid_argument("strip grid needs at least 3 points per direction");
  }
  const int K = trace.max_degree();
  const int dim = trace.dim();
  const int n = K + 1;

  const double hx = 2.0 * grid.half_width / (grid.x_points - 1);
  std::vector<double> xs(grid.x_points);
  for (int i = 0; i < grid.x_points; ++i) xs[i] = -grid.half_width + i * hx;
  const Eigen::MatrixXd H = eval_hermite_functions(K, xs);
  const Eigen::MatrixXd D = eval_hermite_derivatives(K, xs);

  Eigen::VectorXd wx(grid.x_points), wx2(grid.x_points);
  for (int i = 0; i < grid.x_points; ++i) {
    wx(i) = trapezoid_weight(i, grid.x_points, hx);
    wx2(i) = wx(i) * xs[i] * xs[i];
  }
  const Eigen::MatrixXd G0 = H * wx.asDiagonal() * H.transpose();
  const Eigen::MatrixXd G1 = D * wx.asDiagonal() * D.transpose();
  const Eigen::MatrixXd G2 = H * wx2.asDiagonal() * H.transpose();

  const Eigen::VectorXd s = eigenvalues(trace.index_set).cwiseSqrt();
  const double hy = grid.height / (grid.y_points - 1);

  EnergyBreakdown out;
  Eigen::VectorXd w(trace.coeffs.size());
  for (int j = 0; j < grid.y_points; ++j) {
    const double y = j * hy;
    const double wy = trapezoid_weight(j, grid.y_points, hy);
    w = trace.coeffs.cwiseProduct((-s * y).array().exp().matrix());
    const Eigen::VectorXd sw = s.cwiseProduct(w);
    out.grad_y += wy * tensor_form(sw, dim, n, G0, G0, -1);
    double gx = 0.0, pot = 0.0;
    for (int axis = 0; axis < dim; ++axis) {
      gx += tensor_form(w, dim, n, G0, G1, axis);
      pot += tensor_form(w, dim, n, G0, G2, axis);
    }
    out.grad_x += wy * gx;
    out.potential += wy * pot;
  }
  return out;
}

double max_relative_difference(const EnergyBreakdown& a, const EnergyBreakdown& b) {
  auto rel = [](double u, double v) {
    const double scale = std::max(std::abs(u), std::abs(v));
    return scale == 0.0 ? 0.0 : std::abs(u - v) / scale;
  };
  return std::max({rel(a.grad_y, b.grad_y), rel(a.grad_x, b.grad_x),
                   rel(a.potential, b.potential)});
}

}  // namespace oschalf

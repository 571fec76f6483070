#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oschalf {

/// Gauss-Hermite rule for the weight exp(-x^2), tensorized over `dim` axes.
///
/// `weights` integrate g(x) exp(-x^2); `adjusted` = weights * exp(x^2)
/// integrate plain Lebesgue integrands (computed directly, never through
/// exp(x^2), so large orders stay finite).
struct QuadratureGrid {
  int dim = 1;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> adjusted;

  int order() const { return static_cast<int>(nodes.size()); }
  /// Number of tensor points, order^dim.
  std::size_t size() const;
};

/// One-dimensional rule (dim = 1). Throws std::invalid_argument for order < 1.
QuadratureGrid gauss_hermite_rule(int order);

/// Tensor rule with the same 1D rule on every axis.
QuadratureGrid tensor_rule(int order, int dim);

/// Default quadrature order for truncation K: 2K+8 points per axis.
inline int default_order(int K) { return 2 * K + 8; }

/// Hypercube multi-index set {0..K}^N with row-major flat ordering
/// (last axis fastest).
class BasisIndexSet {
 public:
  BasisIndexSet() = default;
  BasisIndexSet(int dim, int max_degree);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return size_; }

  std::vector<int> multi(std::size_t flat) const;
  std::size_t flat(std::span<const int> multi) const;
  /// Sum of degrees |k|.
  int total_degree(std::size_t flat) const;
  /// Largest single-axis degree max_i k_i.
  int max_axis_degree(std::size_t flat) const;

  bool operator==(const BasisIndexSet&) const = default;

 private:
  int dim_ = 0;
  int max_degree_ = 0;
  std::size_t size_ = 0;
};

/// Coefficients of a function on R^N in the tensor Hermite-function basis.
struct SpectralField {
  BasisIndexSet index_set;
  Eigen::VectorXd coeffs;

  SpectralField() = default;
  explicit SpectralField(const BasisIndexSet& set);
  SpectralField(const BasisIndexSet& set, Eigen::VectorXd c);

  int dim() const { return index_set.dim(); }
  int max_degree() const { return index_set.max_degree(); }
  bool is_finite() const { return coeffs.allFinite(); }

  /// Unit coefficient on the given multi-index.
  static SpectralField basis_vector(const BasisIndexSet& set, std::span<const int> multi);
};

/// Matrix H(k, j) = h_k(points[j]) for k = 0..K, evaluated through the
/// normalized three-term recurrence with running rescaling (no overflow or
/// premature underflow for |x| up to a few hundred).
Eigen::MatrixXd eval_hermite_functions(int max_degree, std::span<const double> points);

/// Matrix D(k, j) = h_k'(points[j]), using h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}.
Eigen::MatrixXd eval_hermite_derivatives(int max_degree, std::span<const double> points);

/// Applies a dense matrix along one axis of a row-major tensor.
///
/// `data` has extents `shape`; `m` has m.cols() == shape[axis]. On return
/// shape[axis] is replaced by m.rows().
Eigen::VectorXd apply_along_axis(const Eigen::VectorXd& data, std::vector<int>& shape, int axis,
                                 const Eigen::MatrixXd& m);

/// A truncation K on R^N together with its tensor quadrature grid and the
/// value <-> coefficient transforms. Immutable after construction.
class SpectralSpace {
 public:
  SpectralSpace(int dim, int max_degree, int order = 0);

  int dim() const { return index_set_.dim(); }
  int max_degree() const { return index_set_.max_degree(); }
  int order() const { return grid_.order(); }
  const BasisIndexSet& index_set() const { return index_set_; }
  const QuadratureGrid& grid() const { return grid_; }
  std::size_t grid_size() const { return grid_.size(); }

  /// Coordinates of tensor grid point `flat` (row-major over nodes).
  void grid_point(std::size_t flat, std::span<double> x) const;
  /// Product of adjusted weights at tensor point `flat`.
  double grid_weight(std::size_t flat) const;
  /// |x| at every tensor point.
  const std::vector<double>& grid_radius() const { return radius_; }
  const std::vector<double>& grid_weights() const { return weight_; }

  /// Discrete projection: coefficient k = sum_j W_j h_k(x_j) u(x_j).
  SpectralField to_coeffs(const Eigen::VectorXd& values) const;
  SpectralField to_coeffs(const Eigen::VectorXd& values, const BasisIndexSet& set) const;
  Eigen::VectorXd from_coeffs(const SpectralField& field) const;

  /// Adjusted-weight quadrature of tensor-grid values.
  double integrate(const Eigen::VectorXd& values) const;

  /// Field values at arbitrary points (row-major, points.size() = n*dim).
  Eigen::VectorXd evaluate(const SpectralField& field, std::span<const double> points) const;
  /// Field values on the tensor product of per-axis coordinates `axis_points`.
  Eigen::VectorXd evaluate_tensor(const SpectralField& field,
                                  std::span<const double> axis_points) const;

  void check_field(const SpectralField& field) const;

 private:
  BasisIndexSet index_set_;
  QuadratureGrid grid_;
  Eigen::MatrixXd analysis_;   // (K+1) x order : W_j h_k(x_j)
  Eigen::MatrixXd synthesis_;  // order x (K+1) : h_k(x_j)
  std::vector<double> radius_;
  std::vector<double> weight_;
};

}  // namespace oschalf

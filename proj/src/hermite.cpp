#include "oschalf/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace oschalf {

namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// h_0..h_K at x (and h_{K+1} when extra = 1) via the normalized recurrence,
// carried in scaled form: value = h * exp(s).
void hermite_column(int max_degree, double x, double* out) {
  double s = -0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  double hm1 = 0.0;
  double h = 1.0;
  out[0] = std::exp(s);
  for (int k = 0; k < max_degree; ++k) {
    const double kk = static_cast<double>(k);
    const double hp = x * std::sqrt(2.0 / (kk + 1.0)) * h - std::sqrt(kk / (kk + 1.0)) * hm1;
    hm1 = h;
    h = hp;
    if (std::abs(h) > kRescale) {
      h /= kRescale;
      hm1 /= kRescale;
      s += kLogRescale;
    }
    out[k + 1] = h == 0.0 ? 0.0 : std::copysign(std::exp(s + std::log(std::abs(h))), h);
  }
}

}  // namespace

std::size_t QuadratureGrid::size() const { return ipow(nodes.size(), dim); }

QuadratureGrid gauss_hermite_rule(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite_rule: order must be >= 1");
  const int n = order;
  QuadratureGrid g;
  g.dim = 1;
  g.nodes.assign(n, 0.0);
  g.weights.assign(n, 0.0);
  g.adjusted.assign(n, 0.0);
  if (n == 1) {
    g.weights[0] = std::sqrt(std::numbers::pi);
    g.adjusted[0] = g.weights[0];
    return g;
  }

  // Golub-Welsch: eigenvalues of the Jacobi matrix give the nodes.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  Eigen::VectorXd x = es.eigenvalues();

  std::vector<double> col(n + 1);
  const double sqrt2n = std::sqrt(2.0 * n);
  for (int i = 0; i < n; ++i) {
    double xi = x[i];
    for (int it = 0; it < 4; ++it) {
      hermite_column(n, xi, col.data());
      // h_n' = sqrt(2n) h_{n-1} - x h_n, and h_n(xi) ~ 0 at a root.
      const double d = sqrt2n * col[n - 1] - xi * col[n];
      if (d == 0.0) break;
      xi -= col[n] / d;
    }
    x[i] = xi;
  }

  // Exact symmetry about the origin.
  for (int i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (x[n - 1 - i] - x[i]);
    g.nodes[i] = -a;
    g.nodes[n - 1 - i] = a;
  }
  if (n % 2 == 1) g.nodes[n / 2] = 0.0;

  for (int i = 0; i < n / 2 + n % 2; ++i) {
    hermite_column(n - 1, g.nodes[i], col.data());
    const double hn1 = col[n - 1];
    const double adj = 1.0 / (n * hn1 * hn1);
    const double w = adj * std::exp(-g.nodes[i] * g.nodes[i]);
    g.adjusted[i] = g.adjusted[n - 1 - i] = adj;
    g.weights[i] = g.weights[n - 1 - i] = w;
  }
  return g;
}

QuadratureGrid tensor_rule(int order, int dim) {
  if (dim < 1) throw std::invalid_argument("tensor_rule: dim must be >= 1");
  QuadratureGrid g = gauss_hermite_rule(order);
  g.dim = dim;
  return g;
}

BasisIndexSet::BasisIndexSet(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
  if (dim < 1) throw std::invalid_argument("BasisIndexSet: dim must be >= 1");
  if (max_degree < 0) throw std::invalid_argument("BasisIndexSet: max degree must be >= 0");
  size_ = ipow(static_cast<std::size_t>(max_degree + 1), dim);
}

std::vector<int> BasisIndexSet::multi(std::size_t flat) const {
  std::vector<int> k(dim_);
  const std::size_t base = max_degree_ + 1;
  for (int i = dim_ - 1; i >= 0; --i) {
    k[i] = static_cast<int>(flat % base);
    flat /= base;
  }
  return k;
}

std::size_t BasisIndexSet::flat(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != dim_)
    throw std::invalid_argument("BasisIndexSet::flat: multi-index has wrong length");
  std::size_t f = 0;
  for (int k : multi) {
    if (k < 0 || k > max_degree_)
      throw std::out_of_range("BasisIndexSet::flat: degree out of range");
    f = f * (max_degree_ + 1) + static_cast<std::size_t>(k);
  }
  return f;
}

int BasisIndexSet::total_degree(std::size_t flat) const {
  int s = 0;
  const std::size_t base = max_degree_ + 1;
  for (int i = 0; i < dim_; ++i) {
    s += static_cast<int>(flat % base);
    flat /= base;
  }
  return s;
}

int BasisIndexSet::max_axis_degree(std::size_t flat) const {
  int m = 0;
  const std::size_t base = max_degree_ + 1;
  for (int i = 0; i < dim_; ++i) {
    m = std::max(m, static_cast<int>(flat % base));
    flat /= base;
  }
  return m;
}

SpectralField::SpectralField(const BasisIndexSet& set)
    : index_set(set), coeffs(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(set.size()))) {}

SpectralField::SpectralField(const BasisIndexSet& set, Eigen::VectorXd c)
    : index_set(set), coeffs(std::move(c)) {
  if (static_cast<std::size_t>(coeffs.size()) != set.size())
    throw std::invalid_argument("SpectralField: coefficient count does not match index set");
}

SpectralField SpectralField::basis_vector(const BasisIndexSet& set, std::span<const int> multi) {
  SpectralField f(set);
  f.coeffs[static_cast<Eigen::Index>(set.flat(multi))] = 1.0;
  return f;
}

Eigen::MatrixXd eval_hermite_functions(int max_degree, std::span<const double> points) {
  if (max_degree < 0) throw std::invalid_argument("eval_hermite_functions: K must be >= 0");
  Eigen::MatrixXd h(max_degree + 1, static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j)
    hermite_column(max_degree, points[j], h.col(static_cast<Eigen::Index>(j)).data());
  return h;
}

Eigen::MatrixXd eval_hermite_derivatives(int max_degree, std::span<const double> points) {
  const Eigen::MatrixXd h = eval_hermite_functions(max_degree + 1, points);
  Eigen::MatrixXd d(max_degree + 1, h.cols());
  for (int k = 0; k <= max_degree; ++k) {
    d.row(k) = -std::sqrt(0.5 * (k + 1)) * h.row(k + 1);
    if (k > 0) d.row(k) += std::sqrt(0.5 * k) * h.row(k - 1);
  }
  return d;
}

Eigen::VectorXd apply_along_axis(const Eigen::VectorXd& data, std::vector<int>& shape, int axis,
                                 const Eigen::MatrixXd& m) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int mid = shape[axis];
  if (m.cols() != mid) throw std::invalid_argument("apply_along_axis: extent mismatch");
  Eigen::Index outer = 1, inner = 1;
  for (int i = 0; i < axis; ++i) outer *= shape[i];
  for (int i = axis + 1; i < static_cast<int>(shape.size()); ++i) inner *= shape[i];
  const Eigen::Index rows = m.rows();
  Eigen::VectorXd out(outer * rows * inner);
  if (inner == 1) {
    Eigen::Map<const RowMat> a(data.data(), outer, mid);
    Eigen::Map<RowMat> o(out.data(), outer, rows);
    o.noalias() = a * m.transpose();
  } else {
    for (Eigen::Index b = 0; b < outer; ++b) {
      Eigen::Map<const RowMat> a(data.data() + b * mid * inner, mid, inner);
      Eigen::Map<RowMat> o(out.data() + b * rows * inner, rows, inner);
      o.noalias() = m * a;
    }
  }
  shape[axis] = static_cast<int>(rows);
  return out;
}

SpectralSpace::SpectralSpace(int dim, int max_degree, int order)
    : index_set_(dim, max_degree),
      grid_(tensor_rule(order > 0 ? order : default_order(max_degree), dim)) {
  const int n = grid_.order();
  if (n < max_degree + 1)
    throw std::invalid_argument("SpectralSpace: quadrature order must be >= K+1 (got " +
                                std::to_string(n) + " for K=" + std::to_string(max_degree) + ")");
  const Eigen::MatrixXd h = eval_hermite_functions(max_degree, grid_.nodes);
  synthesis_ = h.transpose();
  analysis_ = h;
  for (int j = 0; j < n; ++j) analysis_.col(j) *= grid_.adjusted[j];

  const std::size_t total = grid_.size();
  radius_.resize(total);
  weight_.resize(total);
  std::vector<double> x(dim);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t r = f;
    double w = 1.0, rr = 0.0;
    for (int i = dim - 1; i >= 0; --i) {
      const std::size_t j = r % n;
      r /= n;
      w *= grid_.adjusted[j];
      rr += grid_.nodes[j] * grid_.nodes[j];
    }
    radius_[f] = std::sqrt(rr);
    weight_[f] = w;
  }
}

void SpectralSpace::grid_point(std::size_t flat, std::span<double> x) const {
  const std::size_t n = grid_.nodes.size();
  for (int i = dim() - 1; i >= 0; --i) {
    x[i] = grid_.nodes[flat % n];
    flat /= n;
  }
}

double SpectralSpace::grid_weight(std::size_t flat) const { return weight_[flat]; }

void SpectralSpace::check_field(const SpectralField& field) const {
  if (field.index_set.dim() != dim())
    throw std::invalid_argument("field dimension does not match the spectral space");
  if (field.index_set.max_degree() > max_degree())
    throw std::invalid_argument("field degree exceeds the spectral space truncation");
  if (static_cast<std::size_t>(field.coeffs.size()) != field.index_set.size())
    throw std::invalid_argument("field coefficient count does not match its index set");
}

SpectralField SpectralSpace::to_coeffs(const Eigen::VectorXd& values) const {
  return to_coeffs(values, index_set_);
}

SpectralField SpectralSpace::to_coeffs(const Eigen::VectorXd& values,
                                       const BasisIndexSet& set) const {
  if (static_cast<std::size_t>(values.size()) != grid_size())
    throw std::invalid_argument("to_coeffs: value count does not match the grid");
  if (set.dim() != dim() || set.max_degree() > max_degree())
    throw std::invalid_argument("to_coeffs: index set does not fit the grid");
  const Eigen::MatrixXd a = analysis_.topRows(set.max_degree() + 1);
  std::vector<int> shape(dim(), order());
  Eigen::VectorXd data = values;
  for (int axis = 0; axis < dim(); ++axis) data = apply_along_axis(data, shape, axis, a);
  return SpectralField(set, std::move(data));
}

Eigen::VectorXd SpectralSpace::from_coeffs(const SpectralField& field) const {
  check_field(field);
  const Eigen::MatrixXd s = synthesis_.leftCols(field.max_degree() + 1);
  std::vector<int> shape(dim(), field.max_degree() + 1);
  Eigen::VectorXd data = field.coeffs;
  for (int axis = 0; axis < dim(); ++axis) data = apply_along_axis(data, shape, axis, s);
  return data;
}

double SpectralSpace::integrate(const Eigen::VectorXd& values) const {
  if (static_cast<std::size_t>(values.size()) != grid_size())
    throw std::invalid_argument("integrate: value count does not match the grid");
  double s = 0.0;
  for (std::size_t j = 0; j < weight_.size(); ++j) s += weight_[j] * values[static_cast<Eigen::Index>(j)];
  return s;
}

Eigen::VectorXd SpectralSpace::evaluate(const SpectralField& field,
                                        std::span<const double> points) const {
  check_field(field);
  const int n_dim = dim();
  const int kp = field.max_degree() + 1;
  const std::size_t npts = points.size() / n_dim;
  Eigen::VectorXd out(static_cast<Eigen::Index>(npts));
  std::vector<double> h(static_cast<std::size_t>(n_dim) * kp);
  Eigen::VectorXd tmp;
  for (std::size_t p = 0; p < npts; ++p) {
    for (int i = 0; i < n_dim; ++i) hermite_column(kp - 1, points[p * n_dim + i], &h[i * kp]);
    tmp = field.coeffs;
    Eigen::Index len = tmp.size();
    for (int i = n_dim - 1; i >= 0; --i) {
      const Eigen::Index outer = len / kp;
      Eigen::VectorXd next(outer);
      for (Eigen::Index o = 0; o < outer; ++o) {
        double s = 0.0;
        for (int j = 0; j < kp; ++j) s += tmp[o * kp + j] * h[i * kp + j];
        next[o] = s;
      }
      tmp = std::move(next);
      len = outer;
    }
    out[static_cast<Eigen::Index>(p)] = tmp[0];
  }
  return out;
}

Eigen::VectorXd SpectralSpace::evaluate_tensor(const SpectralField& field,
                                               std::span<const double> axis_points) const {
  check_field(field);
  const Eigen::MatrixXd s = eval_hermite_functions(field.max_degree(), axis_points).transpose();
  std::vector<int> shape(dim(), field.max_degree() + 1);
  Eigen::VectorXd data = field.coeffs;
  for (int axis = 0; axis < dim(); ++axis) data = apply_along_axis(data, shape, axis, s);
  return data;
}

}  // namespace oschalf

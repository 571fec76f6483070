#include "oschalf/oscillator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "oschalf/errors.hpp"

namespace oschalf {

Eigen::VectorXd eigenvalues(const BasisIndexSet& set) {
  Eigen::VectorXd lam(static_cast<Eigen::Index>(set.size()));
  for (std::size_t f = 0; f < set.size(); ++f)
    lam[static_cast<Eigen::Index>(f)] = 2.0 * set.total_degree(f) + set.dim();
  return lam;
}

LadderMatrices ladder_matrices(int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("ladder_matrices: K must be >= 0");
  const int n = max_degree + 1;
  LadderMatrices m;
  m.X = Eigen::MatrixXd::Zero(n, n);
  m.B = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) m.X(k, k + 1) = m.X(k + 1, k) = std::sqrt(0.5 * (k + 1));
  for (int k = 0; k < n; ++k) {
    m.B(k, k) = k + 0.5;
    if (k + 2 < n) m.B(k, k + 2) = m.B(k + 2, k) = 0.5 * std::sqrt((k + 1.0) * (k + 2.0));
  }
  m.A = -m.B;
  for (int k = 0; k < n; ++k) m.A(k, k) += 2.0 * k + 1.0;
  return m;
}

SpectralField apply_fractional(const SpectralField& field, double s) {
  const Eigen::VectorXd lam = eigenvalues(field.index_set);
  SpectralField out(field.index_set);
  out.coeffs = field.coeffs.array() * lam.array().pow(s);
  return out;
}

double inner_sqrtH(const SpectralField& a, const SpectralField& b) {
  if (!(a.index_set == b.index_set))
    throw std::invalid_argument("inner_sqrtH: fields live on different index sets");
  const Eigen::VectorXd lam = eigenvalues(a.index_set);
  double s = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) s += std::sqrt(lam[i]) * a.coeffs[i] * b.coeffs[i];
  return s;
}

double quadratic_form_sqrtH(const SpectralField& field) { return inner_sqrtH(field, field); }

SpectralField hermite_riesz_apply(const SpectralField& g) { return apply_fractional(g, -0.5); }

double weighted_sup_report(const SpectralSpace& space, const SpectralField& g) {
  const Eigen::VectorXd v = space.from_coeffs(hermite_riesz_apply(g));
  const double rt = trust_radius(g.max_degree());
  const auto& radius = space.grid_radius();
  double sup = 0.0;
  for (std::size_t j = 0; j < radius.size(); ++j)
    if (radius[j] <= rt) sup = std::max(sup, radius[j] * std::abs(v[static_cast<Eigen::Index>(j)]));
  return sup;
}

Eigen::MatrixXd assemble_H_matrix(int max_degree, int dim) {
  const BasisIndexSet set(dim, max_degree);
  if (set.size() > kDenseCapacity)
    throw CapacityError("assemble_H_matrix: (K+1)^N = " + std::to_string(set.size()) +
                        " exceeds the dense limit " + std::to_string(kDenseCapacity));
  const QuadratureGrid rule = gauss_hermite_rule(default_order(max_degree));
  const Eigen::MatrixXd h = eval_hermite_functions(max_degree, rule.nodes);
  const Eigen::MatrixXd d = eval_hermite_derivatives(max_degree, rule.nodes);
  const int n = rule.order();
  Eigen::VectorXd w(n), wx2(n);
  for (int j = 0; j < n; ++j) {
    w[j] = rule.adjusted[j];
    wx2[j] = rule.adjusted[j] * rule.nodes[j] * rule.nodes[j];
  }
  const Eigen::MatrixXd one_d = d * w.asDiagonal() * d.transpose() + h * wx2.asDiagonal() * h.transpose();
  const Eigen::MatrixXd gram = h * w.asDiagonal() * h.transpose();

  const auto size = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXd out(size, size);
  std::vector<std::vector<int>> multi(set.size());
  for (std::size_t f = 0; f < set.size(); ++f) multi[f] = set.multi(f);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = 0; b < size; ++b) {
      const auto& ka = multi[static_cast<std::size_t>(a)];
      const auto& kb = multi[static_cast<std::size_t>(b)];
      double s = 0.0;
      for (int i = 0; i < dim; ++i) {
        double term = one_d(ka[i], kb[i]);
        for (int j = 0; j < dim; ++j)
          if (j != i) term *= gram(ka[j], kb[j]);
        s += term;
      }
      out(a, b) = s;
    }
  }
  return out;
}

}  // namespace oschalf

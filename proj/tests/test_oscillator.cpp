#include <cmath>
#include <vector>

#include <doctest.h>

#include "oschalf/errors.hpp"
#include "oschalf/oscillator.hpp"
#include "oschalf/random.hpp"

using namespace oschalf;

TEST_CASE("eigenvalues are 2|k| + N") {
  const BasisIndexSet set(3, 3);
  const Eigen::VectorXd lam = eigenvalues(set);
  for (std::size_t i = 0; i < set.size(); ++i) CHECK(lam(i) == 2.0 * set.total_degree(i) + 3.0);
}

TEST_CASE("ladder matrices match quadrature of the basis") {
  const int K = 10;
  const LadderMatrices L = ladder_matrices(K);
  const QuadratureGrid g = gauss_hermite_rule(40);
  const Eigen::MatrixXd H = eval_hermite_functions(K, g.nodes);
  const Eigen::MatrixXd D = eval_hermite_derivatives(K, g.nodes);
  Eigen::VectorXd w(g.order()), wx(g.order()), wx2(g.order());
  for (int i = 0; i < g.order(); ++i) {
    w(i) = g.adjusted[i];
    wx(i) = w(i) * g.nodes[i];
    wx2(i) = wx(i) * g.nodes[i];
  }
  CHECK((L.X - H * wx.asDiagonal() * H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((L.B - H * wx2.asDiagonal() * H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((L.A - D * w.asDiagonal() * D.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("assembled operator is diagonal") {
  for (int dim : {1, 2}) {
    for (int K : {0, 3, 8}) {
      const Eigen::MatrixXd M = assemble_H_matrix(K, dim);
      Eigen::MatrixXd expected = eigenvalues(BasisIndexSet(dim, K)).asDiagonal();
      CHECK((M - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("dense assembly refuses oversized sets") { CHECK_THROWS_AS(assemble_H_matrix(16, 3), CapacityError); }

TEST_CASE("fractional powers compose") {
  Rng rng(9);
  SpectralField u(BasisIndexSet(2, 6));
  for (Eigen::Index i = 0; i < u.coeffs.size(); ++i) u.coeffs(i) = rng.normal();
  const SpectralField quarter = apply_fractional(u, 0.25);
  const SpectralField back = apply_fractional(hermite_riesz_apply(u), 0.5);
  CHECK((back.coeffs - u.coeffs).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(inner_sqrtH(u, u) == doctest::Approx(quadratic_form_sqrtH(u)).epsilon(1e-14));
  CHECK(inner_sqrtH(u, u) == doctest::Approx(quarter.coeffs.squaredNorm()).epsilon(1e-13));
}

TEST_CASE("trust radius grows like sqrt(2K)") {
  CHECK(trust_radius(16) == doctest::Approx(0.8 * std::sqrt(33.0)));
  CHECK(trust_radius(32) > trust_radius(16));
}

TEST_CASE("weighted sup of the inverse is finite and positive") {
  const SpectralSpace space(2, 8);
  const SpectralField g = SpectralField::basis_vector(space.index_set(), std::vector<int>{1, 0});
  const double s = weighted_sup_report(space, g);
  CHECK(std::isfinite(s));
  CHECK(s > 0.0);
}

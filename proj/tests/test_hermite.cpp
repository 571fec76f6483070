#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oschalf/hermite.hpp"
#include "oschalf/random.hpp"

using namespace oschalf;

namespace {

// h_n from the physicists' polynomial, for moderate n and |x|.
double reference_hermite(int n, double x) {
  const double norm = std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(std::numbers::pi));
  return std::hermite(static_cast<unsigned>(n), x) * std::exp(-0.5 * x * x) / norm;
}

}  // namespace

TEST_CASE("two point Gauss-Hermite rule") {
  const QuadratureGrid g = gauss_hermite_rule(2);
  REQUIRE(g.order() == 2);
  CHECK(g.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(g.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(g.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-15));
  CHECK(g.weights[1] == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-15));
}

TEST_CASE("three point rule has a zero middle node") {
  const QuadratureGrid g = gauss_hermite_rule(3);
  CHECK(g.nodes[1] == 0.0);
  CHECK(g.nodes[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(g.weights[1] == doctest::Approx(2.0 * std::sqrt(std::numbers::pi) / 3.0).epsilon(1e-14));
  CHECK(g.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi) / 6.0).epsilon(1e-14));
}

TEST_CASE("rule rejects order zero") { CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument); }

TEST_CASE("weights sum to sqrt(pi) and integrate even monomials") {
  for (int n : {5, 17, 40, 200, 1000}) {
    const QuadratureGrid g = gauss_hermite_rule(n);
    double sum = 0.0, x2 = 0.0, x4 = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += g.weights[i];
      x2 += g.weights[i] * g.nodes[i] * g.nodes[i];
      x4 += g.weights[i] * std::pow(g.nodes[i], 4);
    }
    const double sp = std::sqrt(std::numbers::pi);
    CHECK(sum == doctest::Approx(sp).epsilon(1e-13));
    CHECK(x2 == doctest::Approx(sp / 2.0).epsilon(1e-12));
    CHECK(x4 == doctest::Approx(3.0 * sp / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("adjusted weights integrate a Gaussian without weight") {
  const QuadratureGrid g = gauss_hermite_rule(60);
  double s = 0.0;
  for (int i = 0; i < g.order(); ++i) s += g.adjusted[i] * std::exp(-2.0 * g.nodes[i] * g.nodes[i]);
  CHECK(s == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-13));
}

TEST_CASE("hermite functions match the polynomial definition") {
  std::vector<double> xs{-4.0, -1.3, 0.0, 0.25, 2.0, 3.7};
  const Eigen::MatrixXd H = eval_hermite_functions(20, xs);
  for (int n = 0; n <= 20; ++n) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      CHECK(H(n, j) == doctest::Approx(reference_hermite(n, xs[j])).epsilon(1e-11).scale(1e-12));
    }
  }
}

TEST_CASE("hermite functions stay finite far out") {
  std::vector<double> xs{30.0, 100.0, 300.0};
  const Eigen::MatrixXd H = eval_hermite_functions(200, xs);
  CHECK(H.allFinite());
}

TEST_CASE("derivatives match central differences") {
  std::vector<double> xs{-2.5, -0.4, 0.9, 3.1};
  const double h = 1e-5;
  std::vector<double> plus, minus;
  for (double x : xs) {
    plus.push_back(x + h);
    minus.push_back(x - h);
  }
  const Eigen::MatrixXd D = eval_hermite_derivatives(12, xs);
  const Eigen::MatrixXd fd = (eval_hermite_functions(12, plus) - eval_hermite_functions(12, minus)) / (2 * h);
  CHECK((D - fd).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("index set is row major with the last axis fastest") {
  const BasisIndexSet set(3, 2);
  CHECK(set.size() == 27);
  const std::vector<int> m = set.multi(5);
  CHECK(m == std::vector<int>{0, 1, 2});
  CHECK(set.flat(m) == 5);
  CHECK(set.total_degree(5) == 3);
  CHECK(set.max_axis_degree(5) == 2);
  for (std::size_t i = 0; i < set.size(); ++i) CHECK(set.flat(set.multi(i)) == i);
}

TEST_CASE("apply_along_axis agrees with an explicit Kronecker product") {
  Rng rng(11);
  Eigen::MatrixXd A(4, 3), B(2, 5);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = rng.normal();
  for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = rng.normal();
  Eigen::VectorXd v(15);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  std::vector<int> shape{3, 5};
  Eigen::VectorXd w = apply_along_axis(v, shape, 0, A);
  w = apply_along_axis(w, shape, 1, B);
  CHECK(shape == std::vector<int>{4, 2});
  Eigen::MatrixXd kron(8, 15);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 5; ++l) kron(i * 2 + j, k * 5 + l) = A(i, k) * B(j, l);
  CHECK((w - kron * v).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("round trip and Parseval on random fields") {
  Rng rng(3);
  for (int dim : {1, 2, 3}) {
    const SpectralSpace space(dim, dim == 3 ? 5 : 9);
    for (int trial = 0; trial < 10; ++trial) {
      SpectralField u(space.index_set());
      for (Eigen::Index i = 0; i < u.coeffs.size(); ++i) u.coeffs(i) = rng.normal();
      const Eigen::VectorXd values = space.from_coeffs(u);
      const SpectralField back = space.to_coeffs(values);
      CHECK((back.coeffs - u.coeffs).cwiseAbs().maxCoeff() < 1e-12);
      const double l2 = space.integrate(values.cwiseProduct(values));
      CHECK(l2 == doctest::Approx(u.coeffs.squaredNorm()).epsilon(1e-12));
    }
  }
}

TEST_CASE("pointwise evaluation matches grid synthesis") {
  const SpectralSpace space(2, 6);
  Rng rng(5);
  SpectralField u(space.index_set());
  for (Eigen::Index i = 0; i < u.coeffs.size(); ++i) u.coeffs(i) = rng.normal();
  const Eigen::VectorXd grid_values = space.from_coeffs(u);
  std::vector<double> pts;
  std::vector<std::size_t> ids{0, 17, 101, space.grid_size() - 1};
  for (std::size_t id : ids) {
    double x[2];
    space.grid_point(id, x);
    pts.push_back(x[0]);
    pts.push_back(x[1]);
  }
  const Eigen::VectorXd v = space.evaluate(u, pts);
  for (std::size_t i = 0; i < ids.size(); ++i) CHECK(v(i) == doctest::Approx(grid_values(ids[i])).epsilon(1e-12));
}

TEST_CASE("ground mode value at x = 2") {
  const SpectralSpace space(1, 4);
  const SpectralField e0 = SpectralField::basis_vector(space.index_set(), std::vector<int>{0});
  const double pt = 2.0;
  const double v = space.evaluate(e0, std::span<const double>(&pt, 1))(0);
  CHECK(2.0 * v == doctest::Approx(2.0 * std::pow(std::numbers::pi, -0.25) * std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("check_field rejects mismatched sets") {
  const SpectralSpace space(2, 4);
  const SpectralField other(BasisIndexSet(2, 5));
  CHECK_THROWS(space.check_field(other));
}

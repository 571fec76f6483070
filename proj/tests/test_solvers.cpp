#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "oschalf/oscillator.hpp"
#include "oschalf/random.hpp"
#include "oschalf/solvers.hpp"

using namespace oschalf;

namespace {

ProblemSpec power_spec(int dim, int K, double p) {
  ProblemSpec spec;
  spec.dim = dim;
  spec.max_degree = K;
  spec.nonlinearity = Nonlinearity::power(p, dim);
  return spec;
}

}  // namespace

TEST_CASE("ProblemSpec validation") {
  ProblemSpec spec = power_spec(2, 8, 3.0);
  CHECK_NOTHROW(spec.validate());
  spec.max_degree = -1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = power_spec(2, 8, 3.0);
  spec.order = 3;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = power_spec(2, 8, 3.0);
  spec.nonlinearity = Nonlinearity::power(3.0, 3);
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("initial seed is deterministic") {
  const BasisIndexSet set(2, 8);
  CHECK(initial_seed(set, 5).coeffs == initial_seed(set, 5).coeffs);
  CHECK(initial_seed(set, 5).coeffs != initial_seed(set, 6).coeffs);
  CHECK(initial_seed(set, 0).coeffs == SpectralField::basis_vector(set, std::vector<int>{0, 0}).coeffs);
}

TEST_CASE("one dimensional cubic ground state") {
  const ProblemSpec spec = power_spec(1, 16, 3.0);
  const SolveReport r = solve_subcritical(spec, 0);
  REQUIRE(r.converged());
  CHECK(r.energy_monotone);
  CHECK(r.gradient_norm < spec.tolerances.gradient);
  CHECK(std::abs(r.nehari_value) < 1e-8);
  CHECK(r.energy_value > 0.0);
  const SpectralSpace space(1, 16, spec.quadrature_order());
  CHECK(weak_form_residual(space, r.field, spec.nonlinearity, 10, 3) < 1e-7);
}

TEST_CASE("ground state energy lies below every Nehari projection") {
  const ProblemSpec spec = power_spec(2, 6, 3.0);
  const SolveReport r = solve_subcritical(spec, 1);
  REQUIRE(r.converged());
  const SpectralSpace space(2, 6, spec.quadrature_order());
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    SpectralField u(space.index_set());
    for (std::size_t i = 0; i < space.index_set().size(); ++i)
      u.coeffs(static_cast<Eigen::Index>(i)) = rng.normal() * std::exp(-0.5 * space.index_set().total_degree(i));
    u.coeffs *= nehari_scale(space, u, spec.nonlinearity);
    CHECK(energy(space, u, spec.nonlinearity) >= r.energy_value - 1e-10);
  }
}

TEST_CASE("solves are reproducible for a fixed seed") {
  const ProblemSpec spec = power_spec(2, 6, 3.0);
  const SolveReport a = solve_subcritical(spec, 42);
  const SolveReport b = solve_subcritical(spec, 42);
  CHECK(a.field.coeffs == b.field.coeffs);
  CHECK(a.iterations == b.iterations);
  CHECK(a.seed == 42);
}

TEST_CASE("supercritical power is refused") {
  const SolveReport r = solve_subcritical(power_spec(2, 8, 5.0), 0);
  CHECK(r.status == SolveStatus::Refused);
  CHECK(r.iterations == 0);
  CHECK(r.message.find("nonexistence") != std::string::npos);
  CHECK(r.power_identity_coefficient < 0.0);
}

TEST_CASE("critical perturbed level sits below the compactness bound") {
  ProblemSpec spec;
  spec.dim = 2;
  spec.max_degree = 8;
  spec.nonlinearity = Nonlinearity::critical_plus(1.0, 2.0, 2);
  const SolveReport r = solve_critical_perturbed(spec, 0, 2.0523520850);
  REQUIRE(r.converged());
  CHECK(r.level_bound == doctest::Approx(2.0523520850 * 2.0523520850 / 4.0));
  CHECK(r.mp_level_estimate < r.level_bound);
  CHECK(r.mp_level_estimate > 0.0);
}

TEST_CASE("linear solve inverts sqrt(H)") {
  SpectralField g(BasisIndexSet(2, 4));
  g.coeffs.setLinSpaced(-1.0, 2.0);
  const SpectralField u = solve_linear(g);
  CHECK((apply_fractional(u, 0.5).coeffs - g.coeffs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("finite difference oracle on a coarse grid") {
  const BasisIndexSet set(1, 8);
  const SpectralField g = SpectralField::basis_vector(set, std::vector<int>{0});
  FdGrid grid;
  grid.spacing = 1.0 / 16.0;
  const std::vector<double> x = grid.x_nodes();
  CHECK(static_cast<int>(x.size()) == grid.x_points());
  const Eigen::MatrixXd H = eval_hermite_functions(8, x);
  const Eigen::VectorXd gv = H.transpose() * g.coeffs;
  const FdResult fd = fd_oracle_linear(std::vector<double>(gv.data(), gv.data() + gv.size()), grid);
  REQUIRE(fd.converged);
  const Eigen::VectorXd exact = H.transpose() * solve_linear(g).coeffs;
  const Eigen::Map<const Eigen::VectorXd> trace(fd.trace.data(), static_cast<Eigen::Index>(fd.trace.size()));
  CHECK((trace - exact).norm() / exact.norm() < 1e-3);
}

TEST_CASE("participation ratio") {
  const BasisIndexSet set(1, 5);
  CHECK(participation_ratio(SpectralField::basis_vector(set, std::vector<int>{3})) == doctest::Approx(1.0));
  SpectralField flat(set);
  flat.coeffs.setOnes();
  CHECK(participation_ratio(flat) == doctest::Approx(6.0));
}

TEST_CASE("nonattainment probe trends on small truncations") {
  const std::vector<int> degrees{4, 6, 8};
  const ProbeReport p = critical_nonattainment_probe(2, degrees);
  CHECK(p.rows.size() == 3);
  CHECK(p.all_converged);
  CHECK(p.quotient_strictly_decreasing);
}

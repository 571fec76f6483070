#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oschalf/errors.hpp"
#include "oschalf/oscillator.hpp"
#include "oschalf/random.hpp"
#include "oschalf/variational.hpp"

using namespace oschalf;

namespace {

SpectralField random_field(const BasisIndexSet& set, Rng& rng, double decay = 0.0) {
  SpectralField u(set);
  for (std::size_t i = 0; i < set.size(); ++i) {
    u.coeffs(static_cast<Eigen::Index>(i)) = rng.normal() * std::exp(-decay * set.total_degree(i));
  }
  return u;
}

// Maximizer of t -> energy(t u) by golden-section search on [lo, hi].
double golden_max(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl,
                  double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto e = [&](double t) {
    SpectralField v = u;
    v.coeffs *= t;
    return energy(space, v, nl);
  };
  double a = lo, b = hi;
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (e(c) > e(d)) b = d; else a = c;
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("critical exponents") {
  CHECK(critical_exponent(2) == 4.0);
  CHECK(critical_exponent(3) == 3.0);
  CHECK(std::isinf(critical_exponent(1)));
  CHECK(bulk_critical_exponent(3) == 4.0);
}

TEST_CASE("nonlinearity constructors validate") {
  CHECK_THROWS_AS(Nonlinearity::power(2.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Nonlinearity::critical_plus(1.0, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Nonlinearity::critical_plus(0.0, 2.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Nonlinearity::critical_plus(1.0, 3.5, 2), std::invalid_argument);
  CHECK(Nonlinearity::power(3.0, 2).subcritical());
  CHECK_FALSE(Nonlinearity::power(5.0, 2).subcritical());
  CHECK(Nonlinearity::critical_plus(1.0, 2.0, 2).theta() == doctest::Approx(3.0));
}

TEST_CASE("pointwise power nonlinearity") {
  const Nonlinearity nl = Nonlinearity::power(3.0, 1);
  const double x = 0.0;
  CHECK(nl.f(std::span<const double>(&x, 1), -2.0) == doctest::Approx(-4.0));
  CHECK(nl.F(std::span<const double>(&x, 1), -2.0) == doctest::Approx(8.0 / 3.0));
  CHECK(nl.x_dot_grad_F(std::span<const double>(&x, 1), 1.5) == 0.0);
}

TEST_CASE("L4 norm of the ground mode") {
  const SpectralSpace space(1, 16);
  const SpectralField e0 = SpectralField::basis_vector(space.index_set(), std::vector<int>{0});
  CHECK(lp_integral(space, space.from_coeffs(e0), 4.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("gradient matches directional finite differences") {
  Rng rng(21);
  const SpectralSpace space(2, 6);
  const Nonlinearity nl = Nonlinearity::power(3.0, 2);
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralField u = random_field(space.index_set(), rng, 0.3);
    const SpectralField phi = random_field(space.index_set(), rng, 0.3);
    const double h = 1e-5;
    SpectralField up = u, um = u;
    up.coeffs += h * phi.coeffs;
    um.coeffs -= h * phi.coeffs;
    const double fd = (energy(space, up, nl) - energy(space, um, nl)) / (2 * h);
    const double analytic = inner_sqrtH(gradient(space, u, nl), phi);
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
  }
}

TEST_CASE("ray derivative matches finite differences") {
  Rng rng(8);
  const SpectralSpace space(2, 5);
  const Nonlinearity nl = Nonlinearity::critical_plus(1.0, 2.0, 2);
  const SpectralField u = random_field(space.index_set(), rng, 0.3);
  const double t = 0.7, h = 1e-6;
  SpectralField up = u, um = u;
  up.coeffs *= t + h;
  um.coeffs *= t - h;
  const double fd = (energy(space, up, nl) - energy(space, um, nl)) / (2 * h);
  CHECK(ray_derivative(space, u, nl, t) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("nehari scale is the maximizer along the ray") {
  Rng rng(4);
  const SpectralSpace space(2, 6);
  for (const Nonlinearity& nl : {Nonlinearity::power(3.0, 2), Nonlinearity::critical_plus(2.0, 2.5, 2)}) {
    for (int trial = 0; trial < 4; ++trial) {
      const SpectralField u = random_field(space.index_set(), rng, 0.4);
      const double t = nehari_scale(space, u, nl);
      CHECK(t == doctest::Approx(golden_max(space, u, nl, 1e-3, 50.0)).epsilon(1e-6));
      SpectralField v = u;
      v.coeffs *= t;
      CHECK(std::abs(nehari_value(space, v, nl)) < 1e-10 * quadratic_form_sqrtH(v));
    }
  }
}

TEST_CASE("nehari scale of zero throws") {
  const SpectralSpace space(1, 4);
  CHECK_THROWS_AS(nehari_scale(space, SpectralField(space.index_set()), Nonlinearity::power(3.0, 1)),
                  NoScaleError);
}

TEST_CASE("tail mass of the ground mode is erfc(R)") {
  const SpectralSpace space(1, 8);
  const SpectralField e0 = SpectralField::basis_vector(space.index_set(), std::vector<int>{0});
  const std::vector<double> radii{1.0};
  const TailReport rep = check_tail_inequality(space, e0, radii);
  CHECK(rep.rows[0].outside_mass == doctest::Approx(0.15729920705028513).epsilon(1e-10));
  CHECK(rep.violations == 0);
  CHECK(1.0 - ball_mass(space, e0, 2.0) == doctest::Approx(std::erfc(2.0)).epsilon(1e-9));
}

TEST_CASE("tail inequality holds on random fields") {
  Rng rng(13);
  const SpectralSpace space(2, 8);
  const std::vector<double> radii{0.3, 1.0, 2.0, 3.5};
  for (int trial = 0; trial < 20; ++trial) {
    CHECK(check_tail_inequality(space, random_field(space.index_set(), rng), radii).violations == 0);
  }
}

TEST_CASE("lp report of the ground mode") {
  const SpectralSpace space(1, 8);
  const SpectralField e0 = SpectralField::basis_vector(space.index_set(), std::vector<int>{0});
  const std::vector<double> p{2.0, 4.0, kInfinity};
  const LpReport rep = trace_lp_report(space, e0, p);
  CHECK(rep.norms[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rep.norms[2] == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-12));
  CHECK(rep.all_finite);
  CHECK(rep.interpolation_violations == 0);
}

TEST_CASE("small amplitude proxy") {
  const double x[2] = {0.3, -0.1};
  CHECK(small_amplitude_proxy(Nonlinearity::power(3.0, 2), x));
  NonlinearityHooks linear;
  linear.f = [](std::span<const double>, double t) { return t; };
  linear.F = [](std::span<const double>, double t) { return 0.5 * t * t; };
  CHECK_FALSE(small_amplitude_proxy(Nonlinearity::custom(linear, 2.5, 2), x));
}

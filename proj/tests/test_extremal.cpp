#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oschalf/errors.hpp"
#include "oschalf/extremal.hpp"
#include "oschalf/oscillator.hpp"
#include "oschalf/variational.hpp"

using namespace oschalf;

TEST_CASE("cutoff shape") {
  CHECK(cutoff(0.5, 1.0) == 1.0);
  CHECK(cutoff(1.0, 1.0) == 1.0);
  CHECK(cutoff(2.0, 1.0) == 0.0);
  CHECK(cutoff(1.5, 1.0) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.01) {
    CHECK(cutoff(r, 1.0) <= prev);
    prev = cutoff(r, 1.0);
  }
  for (double r : {1.1, 1.37, 1.8}) {
    const double h = 1e-6;
    CHECK(cutoff_derivative(r, 1.0) ==
          doctest::Approx((cutoff(r + h, 1.0) - cutoff(r - h, 1.0)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("bubble profile and sphere areas") {
  CHECK(bubble_profile(0.0, 0.25, 3) == doctest::Approx(4.0));
  CHECK(bubble_profile(0.0, 0.25, 2) == doctest::Approx(2.0));
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
}

TEST_CASE("cut-off bubble integrals match adaptive quadrature") {
  // Reference values from nested adaptive quadrature in (|x|, y) coordinates.
  const CutoffBubbleIntegrals in = cutoff_bubble_integrals(BubbleParams{2, 0.05, 1.0, 1.0}, 3.0);
  CHECK(in.gradient == doctest::Approx(3.6350844331757752).epsilon(1e-8));
  CHECK(in.potential == doctest::Approx(0.191349653298351).epsilon(1e-8));
  CHECK(in.trace_critical == doctest::Approx(3.137077667731527).epsilon(1e-10));
}

TEST_CASE("critical trace integral is scale invariant") {
  for (double eps : {1e-2, 1e-3}) {
    const CutoffBubbleIntegrals in = cutoff_bubble_integrals(BubbleParams{2, eps, 1.0, 1.0}, 3.0);
    CHECK(in.trace_critical == doctest::Approx(std::numbers::pi).epsilon(2.0 * eps * eps));
  }
}

TEST_CASE("rescaling keeps the pure gradient quotient") {
  const std::vector<double> scales = geometric_sequence(1.0, 16.0, 5);
  const ScanReport scan = rescaling_scan(BubbleParams{2, 0.05, 1.0, 1.0}, scales);
  CHECK(scan.sobolev_drift < 1e-9);
  CHECK(scan.quotient_monotone);
  CHECK(scan.potential_slope == doctest::Approx(-4.0).epsilon(1e-3));
  CHECK(scan.sobolev_estimate == doctest::Approx(3.6350844331757752 / std::sqrt(3.137077667731527)).epsilon(1e-8));
}

TEST_CASE("scan rejects widths below the grid") {
  const std::vector<double> scales{1.0, 1e6};
  CHECK_THROWS_AS(rescaling_scan(BubbleParams{2, 0.05, 1.0, 1.0}, scales), ResolutionError);
}

TEST_CASE("geometric sequence and log-log slope") {
  const std::vector<double> x = geometric_sequence(2.0, 32.0, 5);
  CHECK(x.front() == 2.0);
  CHECK(x.back() == 32.0);
  CHECK(x[2] == doctest::Approx(8.0));
  std::vector<double> y;
  for (double v : x) y.push_back(5.0 * std::pow(v, -1.5));
  CHECK(loglog_slope(x, y) == doctest::Approx(-1.5));
}

TEST_CASE("bubble estimate slopes in three dimensions") {
  const std::vector<double> eps = geometric_sequence(0.04, 0.0025, 5);
  const FitReport fit = bubble_estimates_fit(3, eps, 1.0, 2.5);
  CHECK(fit.l2_slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fit.gradient_excess_target == 2.0);
  CHECK(fit.lq_target == doctest::Approx(0.5));
  CHECK(fit.lq_slope == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("projected bubble on a fine truncation") {
  const SpectralSpace space(2, 128);
  const BubbleQuotients q = bubble_quotients(BubbleParams{2, 1.0, 4.0, 1.0}, space);
  CHECK(q.projection_tail < kProjectionTailLimit);
  CHECK(q.critical_fidelity < 1e-8);
  CHECK(q.lambda_quotient > q.sobolev_quotient);
  CHECK(q.sobolev_quotient > std::sqrt(std::numbers::pi));
}

TEST_CASE("projection rejects unresolved bubbles") {
  const SpectralSpace space(2, 32);
  try {
    bubble_trace(BubbleParams{2, 0.05, 1.0, 1.0}, space);
    FAIL("expected ResolutionError");
  } catch (const ResolutionError& e) {
    CHECK(e.suggested() > 0.05);
  }
}

TEST_CASE("decay profile of the ground mode") {
  const SpectralSpace space(1, 16);
  const SpectralField e0 = SpectralField::basis_vector(space.index_set(), std::vector<int>{0});
  const DecayReport d = decay_constant(space, e0, 2.0);
  CHECK(d.constant == doctest::Approx(2.0 * std::pow(std::numbers::pi, -0.25) * std::exp(-2.0)).epsilon(1e-12));
  CHECK(d.non_increasing);
  CHECK(d.no_upward_trend);
  CHECK(d.profile.front().radius == 2.0);
  CHECK(d.profile.back().radius == doctest::Approx(trust_radius(16)));
  CHECK_THROWS_AS(decay_constant(space, e0, 10.0), std::invalid_argument);
}

TEST_CASE("decay constant of the zero field") {
  const SpectralSpace space(2, 8);
  const DecayReport d = decay_constant(space, SpectralField(space.index_set()), 1.0);
  CHECK(d.constant == 0.0);
}

TEST_CASE("projected bubble is normalized in the critical norm") {
  const SpectralSpace space(2, 128);
  const BubbleTrace b = bubble_trace(BubbleParams{2, 1.0, 4.0, 1.0}, space);
  const Eigen::VectorXd v = space.from_coeffs(b.field);
  CHECK(std::pow(lp_integral(space, v, critical_exponent(2)), 1.0 / critical_exponent(2)) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b.critical_fidelity < 1e-4);
}

TEST_CASE("sobolev quotient decreases with the bubble width") {
  const SpectralSpace space(2, 256);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1.0, 0.5, 0.25}) {
    const BubbleQuotients q = bubble_quotients(BubbleParams{2, eps, 4.0, 1.0}, space);
    CHECK(q.sobolev_quotient < prev);
    CHECK(q.lambda_quotient - q.sobolev_quotient ==
          doctest::Approx(q.potential).epsilon(1e-10));
    prev = q.sobolev_quotient;
  }
}

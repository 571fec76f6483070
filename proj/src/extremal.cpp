#include "oschalf/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "oschalf/errors.hpp"
#include "oschalf/oscillator.hpp"
#include "oschalf/parallel.hpp"
#include "oschalf/quadrature.hpp"
#include "oschalf/random.hpp"
#include "oschalf/variational.hpp"

namespace oschalf {

void BubbleParams::validate() const {
  if (dim < 2) throw std::invalid_argument("bubble parameters need N >= 2");
  if (!(eps > 0.0) || !(radius > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("bubble parameters eps, R and t must be positive");
}

double cutoff(double r, double radius) {
  if (r <= radius) return 1.0;
  if (r >= 2.0 * radius) return 0.0;
  const double s = (r - radius) / radius;
  // g(1-s) / (g(1-s) + g(s)) written as a logistic in 1/s - 1/(1-s)
  return 1.0 / (1.0 + std::exp(1.0 / (1.0 - s) - 1.0 / s));
}

double cutoff_derivative(double r, double radius) {
  if (r <= radius || r >= 2.0 * radius) return 0.0;
  const double s = (r - radius) / radius;
  const double phi = cutoff(r, radius);
  return -phi * (1.0 - phi) * (1.0 / ((1.0 - s) * (1.0 - s)) + 1.0 / (s * s)) / radius;
}

double bubble_profile(double r, double eps, int dim) {
  const double a = 0.5 * (dim - 1.0);
  return std::pow(eps / (r * r + eps * eps), a);
}

double sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double minimum_bubble_scale(const SpectralSpace& space) {
  const auto& x = space.grid().nodes;
  const std::size_t n = x.size();
  if (n < 2) return kInfinity;
  return 4.0 * (x[n / 2] - x[n / 2 - 1]);
}

BubbleTrace bubble_trace(const BubbleParams& params, const SpectralSpace& space) {
  params.validate();
  if (space.dim() != params.dim)
    throw std::invalid_argument("bubble_trace: space dimension does not match N");
  const double t = params.scale;
  const double support = 2.0 * params.radius / t;
  const double floor_eps = minimum_bubble_scale(space) * t;
  if (support > trust_radius(space.max_degree())) {
    std::ostringstream msg;
    msg << "bubble support radius " << support << " exceeds the trust radius "
        << trust_radius(space.max_degree()) << "; raise K or shrink R";
    throw ResolutionError(msg.str(), floor_eps);
  }
  const auto& r = space.grid_radius();
  Eigen::VectorXd v(static_cast<Eigen::Index>(r.size()));
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double tr = t * r[j];
    v[static_cast<Eigen::Index>(j)] = cutoff(tr, params.radius) * bubble_profile(tr, params.eps, params.dim);
  }
  const double crit = critical_exponent(params.dim);
  BubbleTrace out;
  out.field = space.to_coeffs(v);
  const double mass = space.integrate(v.cwiseProduct(v));
  out.projection_tail = 1.0 - out.field.coeffs.squaredNorm() / mass;
  if (out.projection_tail > kProjectionTailLimit) {
    std::ostringstream msg;
    msg << "bubble projection loses " << out.projection_tail << " of its L^2 mass at eps = "
        << params.eps << " (K = " << space.max_degree() << "); use eps >= " << floor_eps
        << " or raise K";
    throw ResolutionError(msg.str(), floor_eps);
  }
  const double from_values = lp_integral(space, v, crit);
  const double from_field = lp_integral(space, space.from_coeffs(out.field), crit);
  out.critical_fidelity = std::abs(from_field / from_values - 1.0);
  out.normalizer = std::pow(from_field, 1.0 / crit);
  out.field.coeffs /= out.normalizer;
  return out;
}

BubbleQuotients bubble_quotients(const BubbleParams& params, const SpectralSpace& space) {
  const BubbleTrace trace = bubble_trace(params, space);
  const EnergyBreakdown e = extension_energy(space, trace.field);
  const double crit = critical_exponent(params.dim);
  const double denom =
      std::pow(lp_integral(space, space.from_coeffs(trace.field), crit), 2.0 / crit);
  BubbleQuotients q;
  q.sobolev_quotient = e.gradient() / denom;
  q.lambda_quotient = e.total() / denom;
  q.potential = e.potential / denom;
  q.projection_tail = trace.projection_tail;
  q.critical_fidelity = trace.critical_fidelity;
  return q;
}

CutoffBubbleIntegrals cutoff_bubble_integrals(const BubbleParams& params, double q,
                                              const HalfPlaneGrid& grid) {
  params.validate();
  const double t = params.scale;
  const double big_r = params.radius;
  const double inner = big_r / t;
  if (params.eps / t < 4.0 * grid.min_panel || inner <= grid.min_panel) {
    std::ostringstream msg;
    msg << "rescaled bubble width eps/t = " << params.eps / t << " is below 4 x the smallest panel "
        << grid.min_panel << "; use eps >= " << 4.0 * grid.min_panel * t;
    throw ResolutionError(msg.str(), 4.0 * grid.min_panel * t);
  }

  const int n = params.dim;
  const double a = 0.5 * (n - 1.0);
  const double eps = params.eps;
  const double crit = critical_exponent(n);
  std::vector<double> breaks = geometric_breaks(grid.min_panel, grid.ratio, inner);
  for (int k = 1; k <= grid.shell_panels; ++k) breaks.push_back(inner * (1.0 + static_cast<double>(k) / grid.shell_panels));
  const LegendreRule radial = composite_legendre(breaks, grid.points_per_panel);
  const LegendreRule angular =
      composite_legendre({0.0, 0.25 * std::numbers::pi, 0.5 * std::numbers::pi}, grid.angular_points / 2);
  const double area = sphere_area(n);

  CutoffBubbleIntegrals out;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double r = radial.nodes[i];
    const double sr = t * r;
    const double phi = cutoff(sr, big_r);
    const double dphi = cutoff_derivative(sr, big_r);
    {
      const double w = phi * bubble_profile(sr, eps, n);
      if (w != 0.0) {
        const double jac = area * radial.weights[i] * std::pow(r, n - 1);
        out.trace_critical += jac * std::pow(w, crit);
        out.trace_l2 += jac * w * w;
        out.trace_lq += jac * std::pow(w, q);
      }
    }
    double grad = 0.0, pot = 0.0;
    for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
      // angle measured from the y axis: |x| = r sin(theta), y = r cos(theta)
      const double st = std::sin(angular.nodes[j]), ct = std::cos(angular.nodes[j]);
      const double rho = r * st;
      const double sx = t * rho, sy = t * r * ct;
      const double d = (sy + eps) * (sy + eps) + sx * sx;
      const double w = std::pow(eps / d, a);
      // chain rule factor t from w(x, y) = psi(t x, t y)
      const double g_rho = t * (phi * (-2.0 * a * sx * w / d) + dphi * st * w);
      const double g_y = t * (phi * (-2.0 * a * (sy + eps) * w / d) + dphi * ct * w);
      const double psi = phi * w;
      const double jac = angular.weights[j] * std::pow(rho, n - 1) * r;
      grad += jac * (g_rho * g_rho + g_y * g_y);
      pot += jac * rho * rho * psi * psi;
    }
    out.gradient += area * radial.weights[i] * grad;
    out.potential += area * radial.weights[i] * pot;
  }
  return out;
}

std::vector<double> geometric_sequence(double first, double last, int count) {
  if (count < 2 || !(first > 0.0) || !(last > 0.0))
    throw std::invalid_argument("geometric_sequence: need count >= 2 and positive ends");
  std::vector<double> out(count);
  const double ratio = std::pow(last / first, 1.0 / (count - 1));
  for (int i = 0; i < count; ++i) out[i] = first * std::pow(ratio, i);
  out.back() = last;
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need at least two matching points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ScanReport rescaling_scan(const BubbleParams& params, std::span<const double> scales,
                          const HalfPlaneGrid& grid) {
  params.validate();
  if (scales.size() < 2) throw std::invalid_argument("rescaling_scan: need at least two scales");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] > scales[i - 1]))
      throw std::invalid_argument("rescaling_scan: scales must be strictly increasing");
  ScanReport report;
  report.params = params;
  report.rows.resize(scales.size());
  const double crit = critical_exponent(params.dim);
  parallel_for(scales.size(), [&](std::size_t i) {
    BubbleParams p = params;
    p.scale = scales[i];
    const CutoffBubbleIntegrals in = cutoff_bubble_integrals(p, crit, grid);
    const double denom = std::pow(in.trace_critical, 2.0 / crit);
    ScanRow row;
    row.scale = scales[i];
    row.sobolev_quotient = in.gradient / denom;
    row.potential_term = in.potential / denom;
    row.lambda_quotient = row.sobolev_quotient + row.potential_term;
    report.rows[i] = row;
  });
  std::vector<double> ts, pots;
  double smin = kInfinity, smax = 0.0;
  report.quotient_monotone = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ScanRow& row = report.rows[i];
    ts.push_back(row.scale);
    pots.push_back(row.potential_term);
    smin = std::min(smin, row.sobolev_quotient);
    smax = std::max(smax, row.sobolev_quotient);
    if (i > 0 && row.lambda_quotient > report.rows[i - 1].lambda_quotient * (1.0 + 1e-10))
      report.quotient_monotone = false;
  }
  report.potential_slope = loglog_slope(ts, pots);
  report.sobolev_estimate = smin;
  report.sobolev_drift = (smax - smin) / smin;
  report.plateau_gap = (report.rows.back().lambda_quotient - smin) / smin;
  return report;
}

FitReport bubble_estimates_fit(int dim, std::span<const double> eps_list, double radius, double q,
                               const HalfPlaneGrid& grid) {
  if (dim < 2) throw std::invalid_argument("bubble_estimates_fit needs N >= 2");
  if (eps_list.size() < 3) throw std::invalid_argument("bubble_estimates_fit: need >= 3 eps values");
  if (!(q >= 1.0)) throw std::invalid_argument("bubble_estimates_fit: q must be >= 1");
  FitReport report;
  report.dim = dim;
  report.radius = radius;
  report.q = q;
  report.rows.resize(eps_list.size());
  const double crit = critical_exponent(dim);
  parallel_for(eps_list.size(), [&](std::size_t i) {
    BubbleParams p{dim, eps_list[i], radius, 1.0};
    const CutoffBubbleIntegrals in = cutoff_bubble_integrals(p, q, grid);
    FitRow row;
    row.eps = eps_list[i];
    row.gradient = in.gradient / std::pow(in.trace_critical, 2.0 / crit);
    row.trace_l2 = in.trace_l2 / std::pow(in.trace_critical, 2.0 / crit);
    row.trace_lq = in.trace_lq / std::pow(in.trace_critical, q / crit);
    report.rows[i] = row;
  });

  std::vector<double> eps, l2, lq, d_eps, d_grad;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    eps.push_back(report.rows[i].eps);
    l2.push_back(report.rows[i].trace_l2);
    lq.push_back(report.rows[i].trace_lq);
    if (i > 0) {
      const FitRow& a = report.rows[i - 1];
      const FitRow& b = report.rows[i];
      d_eps.push_back(std::max(a.eps, b.eps));
      d_grad.push_back(std::abs(a.gradient - b.gradient));
    }
  }
  report.gradient_excess_slope = loglog_slope(d_eps, d_grad);
  report.gradient_excess_target = dim - 1.0;
  report.l2_slope = loglog_slope(eps, l2);

  auto one_parameter_residual = [&](auto model) {
    std::vector<double> r(eps.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      r[i] = std::log(l2[i]) - std::log(model(eps[i]));
      mean += r[i] / static_cast<double>(eps.size());
    }
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(eps.size()));
  };
  report.l2_log_model_residual = one_parameter_residual([](double e) { return e * std::log(1.0 / e); });
  report.l2_power_model_residual = one_parameter_residual([](double e) { return e; });
  report.l2_prefers_log_model = report.l2_log_model_residual < report.l2_power_model_residual;

  report.lq_slope = loglog_slope(eps, lq);
  const double threshold = dim / (dim - 1.0);
  report.lq_target = q > threshold ? 0.5 * (2.0 * dim - (dim - 1.0) * q) : 0.5 * (dim - 1.0) * q;
  return report;
}

DecayReport decay_constant(const SpectralSpace& space, const SpectralField& u, double inner_radius,
                           int shells) {
  space.check_field(u);
  const double rt = trust_radius(u.max_degree());
  if (!(inner_radius > 0.0) || inner_radius > rt) {
    std::ostringstream msg;
    msg << "decay_constant: M = " << inner_radius << " must lie in (0, trust radius " << rt << "]";
    throw std::invalid_argument(msg.str());
  }
  if (shells < 2) throw std::invalid_argument("decay_constant: need at least two shells");
  const int n = space.dim();

  std::vector<std::vector<double>> dirs;
  if (n == 1) {
    dirs = {{-1.0}, {1.0}};
  } else if (n == 2) {
    for (int a = 0; a < 64; ++a) {
      const double th = 2.0 * std::numbers::pi * a / 64.0;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    Rng rng(0x5eed);
    for (int a = 0; a < 256; ++a) {
      std::vector<double> d(n);
      double norm = 0.0;
      for (double& c : d) {
        c = rng.normal();
        norm += c * c;
      }
      for (double& c : d) c /= std::sqrt(norm);
      dirs.push_back(std::move(d));
    }
  }

  DecayReport report;
  report.trust_radius = rt;
  std::vector<double> pts;
  for (int s = 0; s < shells; ++s) {
    const double r = inner_radius + (rt - inner_radius) * s / (shells - 1);
    for (const auto& d : dirs)
      for (double c : d) pts.push_back(r * c);
  }
  const Eigen::VectorXd v = space.evaluate(u, pts);
  for (int s = 0; s < shells; ++s) {
    const double r = inner_radius + (rt - inner_radius) * s / (shells - 1);
    double m = 0.0;
    for (std::size_t a = 0; a < dirs.size(); ++a)
      m = std::max(m, r * std::abs(v[static_cast<Eigen::Index>(s * dirs.size() + a)]));
    report.profile.push_back({r, m});
    report.constant = std::max(report.constant, m);
    if (s > 0 && m > report.profile[s - 1].weighted_max * (1.0 + 1e-10)) report.non_increasing = false;
  }
  report.no_upward_trend =
      report.profile.back().weighted_max <= 1.1 * report.profile[shells / 2].weighted_max;
  return report;
}

}  // namespace oschalf

#include "oschalf/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oschalf/errors.hpp"
#include "oschalf/oscillator.hpp"
#include "oschalf/quadrature.hpp"

namespace oschalf {

namespace {

double signed_pow(double t, double e) { return std::copysign(std::pow(std::abs(t), e), t); }

void require_dim(const SpectralSpace& space, const Nonlinearity& nl) {
  if (space.dim() != nl.dim())
    throw std::invalid_argument("nonlinearity dimension does not match the spectral space");
}

}  // namespace

double critical_exponent(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  return dim == 1 ? kInfinity : 2.0 * dim / (dim - 1.0);
}

double bulk_critical_exponent(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  return dim == 1 ? kInfinity : 2.0 * (dim + 1.0) / (dim - 1.0);
}

std::string to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::Power: return "power";
    case NonlinearityKind::CriticalPlus: return "critical_plus";
    case NonlinearityKind::Custom: return "custom";
  }
  return "unknown";
}

Nonlinearity Nonlinearity::power(double p, int dim) {
  if (dim < 1) throw std::invalid_argument("power nonlinearity: dimension must be >= 1");
  if (!(p > 2.0) || !std::isfinite(p))
    throw std::invalid_argument("power nonlinearity: exponent must be finite and > 2");
  Nonlinearity nl;
  nl.kind_ = NonlinearityKind::Power;
  nl.dim_ = dim;
  nl.p_ = p;
  nl.theta_ = p;
  return nl;
}

Nonlinearity Nonlinearity::critical_plus(double lambda, double q, int dim) {
  if (dim < 2) throw std::invalid_argument("critical_plus needs N >= 2 (finite critical exponent)");
  if (!(lambda > 0.0)) throw std::invalid_argument("critical_plus: lambda must be > 0");
  const double top = critical_exponent(dim) - 1.0;
  if (!(q > 1.0 && q < top))
    throw std::invalid_argument("critical_plus: q must lie in (1, 2*-1) = (1, " +
                                std::to_string(top) + ")");
  Nonlinearity nl;
  nl.kind_ = NonlinearityKind::CriticalPlus;
  nl.dim_ = dim;
  nl.lambda_ = lambda;
  nl.q_ = q;
  nl.theta_ = std::min(critical_exponent(dim), q + 1.0);
  return nl;
}

Nonlinearity Nonlinearity::custom(NonlinearityHooks hooks, double theta, int dim) {
  if (dim < 1) throw std::invalid_argument("custom nonlinearity: dimension must be >= 1");
  if (!hooks.f || !hooks.F) throw std::invalid_argument("custom nonlinearity needs f and F hooks");
  Nonlinearity nl;
  nl.kind_ = NonlinearityKind::Custom;
  nl.dim_ = dim;
  nl.hooks_ = std::move(hooks);
  nl.set_theta(theta);
  return nl;
}

void Nonlinearity::set_theta(double theta) {
  if (!(theta > 2.0)) throw std::invalid_argument("growth constant theta must be > 2");
  theta_ = theta;
}

bool Nonlinearity::subcritical() const {
  return kind_ == NonlinearityKind::Power && p_ < critical_exponent(dim_);
}

double Nonlinearity::f(std::span<const double> x, double t) const {
  switch (kind_) {
    case NonlinearityKind::Power: return signed_pow(t, p_ - 1.0);
    case NonlinearityKind::CriticalPlus:
      return signed_pow(t, critical() - 1.0) + lambda_ * signed_pow(t, q_);
    case NonlinearityKind::Custom: return hooks_.f(x, t);
  }
  return 0.0;
}

double Nonlinearity::F(std::span<const double> x, double t) const {
  const double a = std::abs(t);
  switch (kind_) {
    case NonlinearityKind::Power: return std::pow(a, p_) / p_;
    case NonlinearityKind::CriticalPlus: {
      const double s = critical();
      return std::pow(a, s) / s + lambda_ * std::pow(a, q_ + 1.0) / (q_ + 1.0);
    }
    case NonlinearityKind::Custom: return hooks_.F(x, t);
  }
  return 0.0;
}

double Nonlinearity::x_dot_grad_F(std::span<const double> x, double t) const {
  if (kind_ == NonlinearityKind::Custom && hooks_.x_dot_grad_F) return hooks_.x_dot_grad_F(x, t);
  return 0.0;
}

Eigen::VectorXd nonlinear_values(const SpectralSpace& space, const Eigen::VectorXd& u,
                                 const Nonlinearity& nl, NonlinearTerm term) {
  require_dim(space, nl);
  Eigen::VectorXd out(u.size());
  if (term == NonlinearTerm::XGradPrimitive && nl.autonomous()) return Eigen::VectorXd::Zero(u.size());
  if (nl.kind() != NonlinearityKind::Custom) {
    for (Eigen::Index j = 0; j < u.size(); ++j)
      out[j] = term == NonlinearTerm::Force ? nl.f({}, u[j]) : nl.F({}, u[j]);
    return out;
  }
  std::vector<double> x(space.dim());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    space.grid_point(static_cast<std::size_t>(j), x);
    switch (term) {
      case NonlinearTerm::Force: out[j] = nl.f(x, u[j]); break;
      case NonlinearTerm::Primitive: out[j] = nl.F(x, u[j]); break;
      case NonlinearTerm::XGradPrimitive: out[j] = nl.x_dot_grad_F(x, u[j]); break;
    }
  }
  return out;
}

double lp_integral(const SpectralSpace& space, const Eigen::VectorXd& u, double p) {
  const auto& w = space.grid_weights();
  double s = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double a = std::abs(u[j]);
    if (a != 0.0) s += w[static_cast<std::size_t>(j)] * std::pow(a, p);
  }
  return s;
}

double energy(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl) {
  const Eigen::VectorXd v = space.from_coeffs(u);
  return 0.5 * quadratic_form_sqrtH(u) -
         space.integrate(nonlinear_values(space, v, nl, NonlinearTerm::Primitive));
}

SpectralField gradient(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl) {
  const Eigen::VectorXd v = space.from_coeffs(u);
  const SpectralField force =
      space.to_coeffs(nonlinear_values(space, v, nl, NonlinearTerm::Force), u.index_set);
  SpectralField g = hermite_riesz_apply(force);
  g.coeffs = u.coeffs - g.coeffs;
  return g;
}

double nehari_value(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl) {
  return ray_derivative(space, u, nl, 1.0);
}

double ray_derivative(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl,
                      double t) {
  const Eigen::VectorXd v = space.from_coeffs(u);
  const Eigen::VectorXd f = nonlinear_values(space, (t * v).eval(), nl, NonlinearTerm::Force);
  return t * quadratic_form_sqrtH(u) - space.integrate(f.cwiseProduct(v));
}

double nehari_scale(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl) {
  require_dim(space, nl);
  const double norm2 = quadratic_form_sqrtH(u);
  if (!(norm2 > 0.0)) throw NoScaleError("nehari_scale: zero field has no Nehari scale");
  const Eigen::VectorXd v = space.from_coeffs(u);

  if (nl.kind() == NonlinearityKind::Power) {
    const double b = lp_integral(space, v, nl.p());
    if (!(b > 0.0)) throw NoScaleError("nehari_scale: vanishing L^p integral");
    return std::pow(norm2 / b, 1.0 / (nl.p() - 2.0));
  }

  // balance(t) = ||u||^2 - int f(x, t u) u / t, positive near 0 and negative past the root
  std::function<double(double)> balance;
  if (nl.kind() == NonlinearityKind::CriticalPlus) {
    const double s = nl.critical();
    const double c = lp_integral(space, v, s);
    const double d = lp_integral(space, v, nl.q() + 1.0);
    if (!(c > 0.0) && !(d > 0.0)) throw NoScaleError("nehari_scale: vanishing nonlinear integrals");
    balance = [=, &nl](double t) {
      return norm2 - std::pow(t, s - 2.0) * c - nl.lambda() * std::pow(t, nl.q() - 1.0) * d;
    };
  } else {
    balance = [&](double t) {
      const Eigen::VectorXd f = nonlinear_values(space, (t * v).eval(), nl, NonlinearTerm::Force);
      return norm2 - space.integrate(f.cwiseProduct(v)) / t;
    };
  }

  double hi = 1.0;
  while (balance(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e150) throw NoScaleError("nehari_scale: no sign change of d/dt energy(t u)");
  }
  double lo = hi;
  while (balance(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-150) throw NoScaleError("nehari_scale: no sign change of d/dt energy(t u)");
  }
  if (lo == hi) hi = 2.0 * lo;
  for (int it = 0; it < 400 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (balance(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double ball_mass(const SpectralSpace& space, const SpectralField& u, double radius) {
  space.check_field(u);
  const int n = space.dim();
  if (n > 3) {
    const Eigen::VectorXd v = space.from_coeffs(u);
    const auto& r = space.grid_radius();
    const auto& w = space.grid_weights();
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] < radius) s += w[j] * v[static_cast<Eigen::Index>(j)] * v[static_cast<Eigen::Index>(j)];
    return s;
  }

  const int K = u.max_degree();
  std::vector<double> breaks;
  const int panels = std::max(1, static_cast<int>(std::ceil(radius / 0.5)));
  for (int p = 0; p <= panels; ++p) breaks.push_back(radius * p / panels);
  const LegendreRule radial = composite_legendre(breaks, 12);

  std::vector<double> pts;
  std::vector<double> wts;
  if (n == 1) {
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        pts.push_back(sgn * radial.nodes[i]);
        wts.push_back(radial.weights[i]);
      }
    }
  } else if (n == 2) {
    const int m = 2 * n * K + 16;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = radial.nodes[i];
      for (int a = 0; a < m; ++a) {
        const double th = 2.0 * std::numbers::pi * a / m;
        pts.push_back(r * std::cos(th));
        pts.push_back(r * std::sin(th));
        wts.push_back(radial.weights[i] * r * 2.0 * std::numbers::pi / m);
      }
    }
  } else {
    const int m = 2 * n * K + 16;
    const LegendreRule polar = gauss_legendre(n * K + 8);
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = radial.nodes[i];
      for (std::size_t b = 0; b < polar.nodes.size(); ++b) {
        const double ct = polar.nodes[b];
        const double st = std::sqrt(1.0 - ct * ct);
        for (int a = 0; a < m; ++a) {
          const double ph = 2.0 * std::numbers::pi * a / m;
          pts.push_back(r * st * std::cos(ph));
          pts.push_back(r * st * std::sin(ph));
          pts.push_back(r * ct);
          wts.push_back(radial.weights[i] * r * r * polar.weights[b] * 2.0 * std::numbers::pi / m);
        }
      }
    }
  }
  const Eigen::VectorXd v = space.evaluate(u, pts);
  double s = 0.0;
  for (std::size_t j = 0; j < wts.size(); ++j) s += wts[j] * v[static_cast<Eigen::Index>(j)] * v[static_cast<Eigen::Index>(j)];
  return s;
}

TailReport check_tail_inequality(const SpectralSpace& space, const SpectralField& u,
                                 std::span<const double> radii) {
  space.check_field(u);
  const double mass = u.coeffs.squaredNorm();
  const double norm2 = quadratic_form_sqrtH(u);
  TailReport report;
  for (double r : radii) {
    if (!(r > 0.0)) throw std::invalid_argument("check_tail_inequality: radii must be positive");
    TailRow row;
    row.radius = r;
    row.outside_mass = std::max(0.0, mass - ball_mass(space, u, r));
    row.bound = norm2 / r;
    row.holds = row.outside_mass <= row.bound + kTailSlack;
    if (!row.holds) ++report.violations;
    report.rows.push_back(row);
  }
  return report;
}

double sup_norm(const SpectralSpace& space, const SpectralField& u) {
  space.check_field(u);
  const int n = space.dim();
  const double rt = trust_radius(u.max_degree());
  const int cap = static_cast<int>(std::floor(std::pow(2.0e6, 1.0 / n)));
  int half = static_cast<int>(std::ceil(rt / 0.02));
  half = std::min(half, (cap - 1) / 2);
  std::vector<double> axis(2 * half + 1);
  for (int i = -half; i <= half; ++i) axis[i + half] = rt * i / std::max(half, 1);

  double sup = 0.0;
  const Eigen::VectorXd sample = space.evaluate_tensor(u, axis);
  const std::size_t m = axis.size();
  for (Eigen::Index j = 0; j < sample.size(); ++j) {
    std::size_t f = static_cast<std::size_t>(j);
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      r2 += axis[f % m] * axis[f % m];
      f /= m;
    }
    if (r2 <= rt * rt) sup = std::max(sup, std::abs(sample[j]));
  }
  const Eigen::VectorXd v = space.from_coeffs(u);
  const auto& radius = space.grid_radius();
  for (std::size_t j = 0; j < radius.size(); ++j)
    if (radius[j] <= rt) sup = std::max(sup, std::abs(v[static_cast<Eigen::Index>(j)]));
  return sup;
}

LpReport trace_lp_report(const SpectralSpace& space, const SpectralField& u,
                         std::span<const double> exponents) {
  space.check_field(u);
  LpReport report;
  const Eigen::VectorXd v = space.from_coeffs(u);
  for (double p : exponents) {
    if (!(p >= 2.0)) throw std::invalid_argument("trace_lp_report: exponents must lie in [2, inf]");
    const double norm = std::isinf(p) ? sup_norm(space, u) : std::pow(lp_integral(space, v, p), 1.0 / p);
    report.exponents.push_back(p);
    report.norms.push_back(norm);
    report.all_finite = report.all_finite && std::isfinite(norm);
  }
  auto find = [&](double p) -> double {
    for (std::size_t i = 0; i < report.exponents.size(); ++i)
      if (report.exponents[i] == p) return report.norms[i];
    return std::pow(lp_integral(space, v, p), 1.0 / p);
  };
  const double l2 = find(2.0);
  for (std::size_t i = 0; i < report.exponents.size(); ++i) {
    for (std::size_t j = 0; j < report.exponents.size(); ++j) {
      const double r = report.exponents[i], s = report.exponents[j];
      if (!(r > 2.0 && s > r)) continue;
      const double inv_s = std::isinf(s) ? 0.0 : 1.0 / s;
      const double a = (0.5 - 1.0 / r) / (0.5 - inv_s);
      const double bound = std::pow(l2, 1.0 - a) * std::pow(report.norms[j], a);
      const double excess = report.norms[i] - bound;
      ++report.interpolation_checks;
      report.worst_interpolation_excess = std::max(report.worst_interpolation_excess, excess);
      if (excess > 1e-10 * std::max(1.0, bound)) ++report.interpolation_violations;
    }
  }
  return report;
}

bool small_amplitude_proxy(const Nonlinearity& nl, std::span<const double> x) {
  if (nl.f(x, 0.0) != 0.0) return false;
  double prev = kInfinity;
  for (double t = 1e-3; t > 0.5e-8; t *= 0.1) {
    const double ratio = std::abs(nl.f(x, t) / t);
    if (!(ratio < prev)) return false;
    prev = ratio;
  }
  return true;
}

}  // namespace oschalf

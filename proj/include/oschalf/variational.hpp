#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "oschalf/hermite.hpp"

namespace oschalf {

/// 2N/(N-1); infinite for N = 1.
double critical_exponent(int dim);
/// 2(N+1)/(N-1); infinite for N = 1.
double bulk_critical_exponent(int dim);

enum class NonlinearityKind { Power, CriticalPlus, Custom };

std::string to_string(NonlinearityKind kind);

/// Pointwise hooks for a user nonlinearity. `x_dot_grad_F` returns
/// sum_i x_i dF/dx_i and may be left empty for autonomous f.
struct NonlinearityHooks {
  std::function<double(std::span<const double>, double)> f;
  std::function<double(std::span<const double>, double)> F;
  std::function<double(std::span<const double>, double)> x_dot_grad_F;
};

/// f(x, t) with primitive F. Power is |t|^{p-2} t; critical-plus is
/// |t|^{2*-2} t + lambda |t|^{q-1} t.
class Nonlinearity {
 public:
  static Nonlinearity power(double p, int dim);
  static Nonlinearity critical_plus(double lambda, double q, int dim);
  static Nonlinearity custom(NonlinearityHooks hooks, double theta, int dim);

  NonlinearityKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  double lambda() const { return lambda_; }
  double q() const { return q_; }
  /// Growth constant recorded for reports.
  double theta() const { return theta_; }
  void set_theta(double theta);
  double critical() const { return critical_exponent(dim_); }
  bool autonomous() const { return kind_ != NonlinearityKind::Custom || !hooks_.x_dot_grad_F; }
  /// Pure power strictly below the critical exponent.
  bool subcritical() const;

  double f(std::span<const double> x, double t) const;
  double F(std::span<const double> x, double t) const;
  double x_dot_grad_F(std::span<const double> x, double t) const;

 private:
  NonlinearityKind kind_ = NonlinearityKind::Power;
  int dim_ = 1;
  double p_ = 0.0;
  double lambda_ = 0.0;
  double q_ = 0.0;
  double theta_ = 0.0;
  NonlinearityHooks hooks_;
};

/// Grid values of f(x, u(x)), F(x, u(x)) or x . F_x(x, u(x)).
enum class NonlinearTerm { Force, Primitive, XGradPrimitive };
Eigen::VectorXd nonlinear_values(const SpectralSpace& space, const Eigen::VectorXd& u,
                                 const Nonlinearity& nl, NonlinearTerm term);

/// Adjusted-weight integral of |u|^p over the grid.
double lp_integral(const SpectralSpace& space, const Eigen::VectorXd& u, double p);

/// 1/2 <sqrt(H) u, u> - int F(x, u).
double energy(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl);

/// u - H^{-1/2} P_K f(x, u): the gradient in the sqrt(H) metric.
SpectralField gradient(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl);

/// <I'(u), u> = ||u||^2 - int f(x, u) u.
double nehari_value(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl);

/// d/dt energy(t u) by the analytic formula.
double ray_derivative(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl,
                      double t);

/// Positive t with d/dt energy(t u) = 0. Throws NoScaleError when u = 0 or the
/// nonlinear integrals vanish.
double nehari_scale(const SpectralSpace& space, const SpectralField& u, const Nonlinearity& nl);

inline constexpr double kTailSlack = 1e-12;

struct TailRow {
  double radius = 0.0;
  double outside_mass = 0.0;
  double bound = 0.0;
  bool holds = true;
};

struct TailReport {
  std::vector<TailRow> rows;
  int violations = 0;
};

/// L^2 mass of u inside the ball |x| < R by polar Gauss-Legendre quadrature
/// (tensor node mask for N > 3).
double ball_mass(const SpectralSpace& space, const SpectralField& u, double radius);

/// int_{|x|>R} u^2 <= ||u||^2 / R + kTailSlack for every R in the list.
TailReport check_tail_inequality(const SpectralSpace& space, const SpectralField& u,
                                 std::span<const double> radii);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpReport {
  std::vector<double> exponents;
  std::vector<double> norms;
  bool all_finite = true;
  int interpolation_checks = 0;
  int interpolation_violations = 0;
  /// Largest |u|_r - |u|_2^{1-a} |u|_s^a seen (negative when all hold).
  double worst_interpolation_excess = -kInfinity;
};

/// sup |u| over a uniform odd sample and the grid nodes inside the trust radius.
double sup_norm(const SpectralSpace& space, const SpectralField& u);

/// Quadrature L^p norms (kInfinity for the sup norm) with the interpolation
/// check |u|_r <= |u|_2^{1-a} |u|_s^a over all ordered pairs r < s from the list.
LpReport trace_lp_report(const SpectralSpace& space, const SpectralField& u,
                         std::span<const double> exponents);

/// Ratio f(x,t)/t at t = 1e-3 ... 1e-8 for a sample x; true when it
/// decreases monotonically in magnitude and f(x,0) = 0.
bool small_amplitude_proxy(const Nonlinearity& nl, std::span<const double> x);

}  // namespace oschalf

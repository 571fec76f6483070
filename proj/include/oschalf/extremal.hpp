#pragma once

#include <span>
#include <vector>

#include "oschalf/extension.hpp"
#include "oschalf/hermite.hpp"

namespace oschalf {

/// Bubble u_eps(x) = eps^{(N-1)/2} / (|x|^2 + eps^2)^{(N-1)/2}, cut off
/// smoothly between radius R and 2R, and rescaled as w(x, y) = psi(t x, t y).
struct BubbleParams {
  int dim = 2;
  double eps = 0.05;
  double radius = 1.0;
  double scale = 1.0;

  void validate() const;
};

/// phi(r) = 1 for r <= R, 0 for r >= 2R, and g(1-s) / (g(1-s) + g(s)) with
/// s = (r - R)/R and g(s) = exp(-1/s) in between.
double cutoff(double r, double radius);
double cutoff_derivative(double r, double radius);

double bubble_profile(double r, double eps, int dim);

/// Surface area of the unit sphere S^{N-1}.
double sphere_area(int dim);

/// Projection of the cut-off bubble trace onto the Hermite basis.
struct BubbleTrace {
  SpectralField field;  // normalized so that |trace|_{2*} = 1
  /// 1 - sum c_k^2 / int v^2 (relative L^2 mass lost by the projection)
  double projection_tail = 0.0;
  /// | int |P v|^{2*} / int |v|^{2*} - 1 |
  double critical_fidelity = 0.0;
  double normalizer = 0.0;
};

/// Largest tail tolerated before a projection is rejected.
inline constexpr double kProjectionTailLimit = 1e-6;

/// 4 x the spacing of the two central quadrature nodes.
double minimum_bubble_scale(const SpectralSpace& space);

/// Throws ResolutionError (suggesting the minimum eps) when the tail
/// exceeds kProjectionTailLimit or the support leaves the trust radius.
BubbleTrace bubble_trace(const BubbleParams& params, const SpectralSpace& space);

struct BubbleQuotients {
  double sobolev_quotient = 0.0;  // (grad_y + grad_x) / |trace|_{2*}^2
  double lambda_quotient = 0.0;   // (grad_y + grad_x + potential) / |trace|_{2*}^2
  double potential = 0.0;
  double projection_tail = 0.0;
  double critical_fidelity = 0.0;
};

/// Quotients of the Poisson lift of the projected, normalized trace.
BubbleQuotients bubble_quotients(const BubbleParams& params, const SpectralSpace& space);

/// Polar quadrature in the (|x|, y) quarter plane: radial panels graded
/// geometrically from `min_panel` up to the inner cutoff radius R/t, uniform
/// panels across the cutoff shell [R/t, 2R/t], Gauss-Legendre in angle.
struct HalfPlaneGrid {
  double min_panel = 1e-6;
  double ratio = 1.25;
  int points_per_panel = 8;
  int shell_panels = 8;
  int angular_points = 48;
};

/// Integrals of the rescaled cut-off harmonic bubble psi(t x, t y).
struct CutoffBubbleIntegrals {
  double gradient = 0.0;      // int int |grad w|^2
  double potential = 0.0;     // int int |x|^2 w^2
  double trace_critical = 0.0;  // int |w(x,0)|^{2*}
  double trace_l2 = 0.0;      // int |w(x,0)|^2
  double trace_lq = 0.0;      // int |w(x,0)|^q
};

CutoffBubbleIntegrals cutoff_bubble_integrals(const BubbleParams& params, double q,
                                              const HalfPlaneGrid& grid = {});

struct ScanRow {
  double scale = 0.0;
  double sobolev_quotient = 0.0;
  double lambda_quotient = 0.0;
  double potential_term = 0.0;  // potential / |trace|_{2*}^2
};

struct ScanReport {
  BubbleParams params;
  std::vector<ScanRow> rows;
  double potential_slope = 0.0;   // least-squares log-log slope vs t
  bool quotient_monotone = false;  // non-increasing within 1e-10
  double sobolev_estimate = 0.0;  // min pure-gradient quotient on the scan
  double plateau_gap = 0.0;       // (Lambda(t_max) - S_est) / S_est
  double sobolev_drift = 0.0;     // (max - min) / min of the pure-gradient quotient
};

/// Lambda quotient of w(x, y) = psi(t x, t y) for each t. Requires
/// eps / t >= 4 min_panel.
ScanReport rescaling_scan(const BubbleParams& params, std::span<const double> scales,
                          const HalfPlaneGrid& grid = {});

/// Geometric list a, a r, a r^2, ... of `count` values.
std::vector<double> geometric_sequence(double first, double last, int count);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct FitRow {
  double eps = 0.0;
  double gradient = 0.0;  // int int |grad eta_eps|^2
  double trace_l2 = 0.0;  // |eta_eps(.,0)|_2^2
  double trace_lq = 0.0;  // |eta_eps(.,0)|_q^q
};

struct FitReport {
  int dim = 2;
  double radius = 1.0;
  double q = 3.0;
  std::vector<FitRow> rows;
  double gradient_excess_slope = 0.0;  // slope of successive differences
  double gradient_excess_target = 0.0;
  double l2_slope = 0.0;
  /// One-parameter fits of log |eta|_2^2 against eps log(1/eps) and eps.
  double l2_log_model_residual = 0.0;
  double l2_power_model_residual = 0.0;
  bool l2_prefers_log_model = false;
  double lq_slope = 0.0;
  double lq_target = 0.0;
};

/// Slopes of the normalized cut-off bubble quantities against eps.
FitReport bubble_estimates_fit(int dim, std::span<const double> eps_list, double radius, double q,
                               const HalfPlaneGrid& grid = {});

struct DecayRow {
  double radius = 0.0;
  double weighted_max = 0.0;  // max over the shell of |x| |u(x)|
};

struct DecayReport {
  double constant = 0.0;
  double trust_radius = 0.0;
  std::vector<DecayRow> profile;
  /// last shell <= 1.1 x the middle shell
  bool no_upward_trend = true;
  /// every shell <= the previous one (relative slack 1e-10)
  bool non_increasing = true;
};

/// Samples |x| |u(x)| on shells from M to the trust radius. Throws
/// std::invalid_argument when M lies beyond the trust radius.
DecayReport decay_constant(const SpectralSpace& space, const SpectralField& u, double inner_radius,
                           int shells = 24);

}  // namespace oschalf

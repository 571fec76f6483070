#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oschalf/hermite.hpp"
#include "oschalf/variational.hpp"

namespace oschalf {

struct Tolerances {
  double gradient = 1e-8;
  double nehari = 1e-8;
  double pohozaev = 1e-3;
  double power_identity = 1e-3;
  /// Relative energy increase tolerated between accepted steps (rounding).
  double energy_slack = 1e-14;
};

struct ProblemSpec {
  int dim = 2;
  int max_degree = 16;
  /// 0 selects the default 2K+8.
  int order = 0;
  Nonlinearity nonlinearity = Nonlinearity::power(3.0, 2);
  Tolerances tolerances;
  int max_iterations = 20000;

  int quadrature_order() const { return order > 0 ? order : default_order(max_degree); }
  /// Throws std::invalid_argument when fields are inconsistent.
  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations, Stalled, Refused };
std::string to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIterations;
  std::string message;
  SpectralField field;
  double gradient_norm = std::numeric_limits<double>::quiet_NaN();
  double energy_value = std::numeric_limits<double>::quiet_NaN();
  double nehari_value = std::numeric_limits<double>::quiet_NaN();
  double pohozaev_rel = std::numeric_limits<double>::quiet_NaN();
  double power_identity_rel = std::numeric_limits<double>::quiet_NaN();
  double power_identity_coefficient = std::numeric_limits<double>::quiet_NaN();
  double mp_level_estimate = std::numeric_limits<double>::quiet_NaN();
  /// S^N / (2N) from the supplied S estimate (critical runs only).
  double level_bound = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  int max_degree = 0;
  int order = 0;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  bool truncation_tainted = false;
  bool energy_monotone = true;
  std::vector<double> energy_trace;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// e_0 scaled later onto the Nehari manifold; seed != 0 adds a small
/// deterministic perturbation on the low shells.
SpectralField initial_seed(const BasisIndexSet& set, std::uint64_t seed);

/// Nehari-projected Sobolev-gradient descent with Armijo backtracking
/// (c = 1e-4, step halving from 1). No criticality checks on nl.
SolveReport nehari_descent(const SpectralSpace& space, const Nonlinearity& nl,
                           const SpectralField& start, const Tolerances& tol, int max_iterations);

/// Ground state for a pure power (or custom) nonlinearity. Supercritical
/// powers with N >= 2 return status Refused without iterating.
SolveReport solve_subcritical(const ProblemSpec& spec, std::uint64_t seed);

/// Mountain-pass solution for |t|^{2*-2} t + lambda |t|^{q-1} t. When
/// `sobolev_estimate` is given the level is compared against S^N/(2N).
SolveReport solve_critical_perturbed(const ProblemSpec& spec, std::uint64_t seed,
                                     std::optional<double> sobolev_estimate = std::nullopt);

/// H^{-1/2} g as one Newton step of the linear problem from zero.
SpectralField solve_linear(const SpectralField& g);

/// |<u, phi>_{sqrt H} - int f(x,u) phi| / ||phi||, maximized over `count`
/// random test fields drawn from `seed`.
double weak_form_residual(const SpectralSpace& space, const SpectralField& u,
                          const Nonlinearity& nl, int count, std::uint64_t seed);

/// Uniform box grid [-L, L] x [0, Y] with spacing h (N = 1).
struct FdGrid {
  double half_width = 8.0;
  double height = 10.0;
  double spacing = 1.0 / 64.0;

  int x_points() const;  // including both Dirichlet ends
  int y_rows() const;    // rows 0 .. Y/h - 1 (row Y/h is Dirichlet)
  std::vector<double> x_nodes() const;
};

struct FdResult {
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> x;
  std::vector<double> trace;
};

/// Five-point discretization of -v_yy - v_xx + x^2 v = 0 with -v_y(x,0) = g
/// (ghost node, first row halved for symmetry) and zero Dirichlet data on
/// the other sides, solved by conjugate gradients preconditioned with the
/// exact x-diagonalized, y-tridiagonal inverse. `g` holds values at
/// x_nodes(); the endpoints are ignored.
FdResult fd_oracle_linear(std::span<const double> g, const FdGrid& grid, double tol = 1e-10,
                          int max_iterations = 500);

struct ProbeRow {
  int max_degree = 0;
  double lambda_quotient = 0.0;
  double sobolev_quotient = 0.0;
  double potential_share = 0.0;
  double participation = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIterations;
};

struct ProbeReport {
  int dim = 2;
  std::vector<ProbeRow> rows;
  bool quotient_strictly_decreasing = false;
  bool potential_share_decreasing = false;
  bool participation_increasing = false;
  bool all_converged = false;
};

/// Minimizes ||u||^2 / |u|_{2*}^2 at each truncation by descent with the
/// critical power and records how the minimizer moves as K grows.
ProbeReport critical_nonattainment_probe(int dim, std::span<const int> degrees,
                                         const Tolerances& tol = {}, int max_iterations = 20000);

/// Inverse participation ratio (sum c^2)^2 / sum c^4.
double participation_ratio(const SpectralField& u);

}  // namespace oschalf

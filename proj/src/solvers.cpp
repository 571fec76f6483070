#include "oschalf/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "oschalf/errors.hpp"
#include "oschalf/extension.hpp"
#include "oschalf/oscillator.hpp"
#include "oschalf/parallel.hpp"
#include "oschalf/random.hpp"

namespace oschalf {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;
constexpr double kGridCapacity = 5.0e7;

SpectralSpace make_space(int dim, int max_degree, int order) {
  if (std::pow(static_cast<double>(order), dim) > kGridCapacity)
    throw CapacityError("quadrature grid order^N = " + std::to_string(order) + "^" +
                        std::to_string(dim) + " exceeds the tensor-grid limit");
  return SpectralSpace(dim, max_degree, order);
}

double sqrtH_norm(const SpectralField& g) { return std::sqrt(std::max(0.0, quadratic_form_sqrtH(g))); }

void finish_report(const SpectralSpace& space, const Nonlinearity& nl, SolveReport& r) {
  r.nehari_value = nehari_value(space, r.field, nl);
  const PohozaevTerms terms = pohozaev_terms(space, r.field, nl);
  r.pohozaev_rel = terms.residual;
  r.truncation_tainted = terms.truncation_tainted;
  if (nl.kind() == NonlinearityKind::Power) {
    const PowerIdentity pid = power_identity_residual(space, r.field, nl.p());
    r.power_identity_rel = pid.residual;
    r.power_identity_coefficient = pid.coefficient;
  }
}

}  // namespace

void ProblemSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (max_degree < 0) throw std::invalid_argument("truncation K must be >= 0");
  if (order != 0 && order < max_degree + 1)
    throw std::invalid_argument("quadrature order must be >= K+1");
  if (nonlinearity.dim() != dim)
    throw std::invalid_argument("nonlinearity dimension does not match the problem dimension");
  if (nonlinearity.kind() == NonlinearityKind::CriticalPlus && dim < 2)
    throw std::invalid_argument("critical problems need N >= 2");
  if (!(tolerances.gradient > 0.0)) throw std::invalid_argument("gradient tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::Refused: return "refused";
  }
  return "unknown";
}

SpectralField initial_seed(const BasisIndexSet& set, std::uint64_t seed) {
  SpectralField u(set);
  u.coeffs[0] = 1.0;
  if (seed != 0) {
    Rng rng(seed);
    for (std::size_t f = 1; f < set.size(); ++f) {
      const double amp = set.total_degree(f) <= 4 ? 0.02 : 0.0;
      const double draw = rng.uniform(-1.0, 1.0);
      u.coeffs[static_cast<Eigen::Index>(f)] += amp * draw;
    }
  }
  return u;
}

SolveReport nehari_descent(const SpectralSpace& space, const Nonlinearity& nl,
                           const SpectralField& start, const Tolerances& tol, int max_iterations) {
  SolveReport r;
  r.max_degree = start.max_degree();
  r.order = space.order();
  r.tolerances = tol;

  SpectralField u = start;
  u.coeffs *= nehari_scale(space, u, nl);
  double e = energy(space, u, nl);
  r.energy_trace.push_back(e);

  SpectralField trial(u.index_set);
  int it = 0;
  for (;; ++it) {
    const SpectralField g = gradient(space, u, nl);
    const double gn = sqrtH_norm(g);
    r.gradient_norm = gn;
    if (gn < tol.gradient) {
      r.status = SolveStatus::Converged;
      break;
    }
    if (it >= max_iterations) {
      r.status = SolveStatus::MaxIterations;
      break;
    }
    double step = 1.0;
    bool accepted = false;
    double e_trial = e;
    while (step >= kMinStep) {
      trial.coeffs = u.coeffs - step * g.coeffs;
      try {
        trial.coeffs *= nehari_scale(space, trial, nl);
        e_trial = energy(space, trial, nl);
        if (e_trial <= e - kArmijo * step * gn * gn + tol.energy_slack * std::abs(e)) {
          accepted = true;
          break;
        }
      } catch (const NoScaleError&) {
      }
      step *= 0.5;
    }
    if (!accepted) {
      r.status = SolveStatus::Stalled;
      break;
    }
    if (e_trial > e + tol.energy_slack * std::abs(e)) r.energy_monotone = false;
    u.coeffs.swap(trial.coeffs);
    e = e_trial;
    r.energy_trace.push_back(e);
  }
  r.iterations = it;
  r.field = std::move(u);
  r.energy_value = e;
  std::ostringstream msg;
  msg << to_string(r.status) << " after " << it << " iterations, gradient norm " << r.gradient_norm;
  r.message = msg.str();
  return r;
}

SolveReport solve_subcritical(const ProblemSpec& spec, std::uint64_t seed) {
  spec.validate();
  const Nonlinearity& nl = spec.nonlinearity;
  if (nl.kind() == NonlinearityKind::CriticalPlus)
    throw std::invalid_argument("solve_subcritical: use solve_critical_perturbed for critical_plus");
  if (nl.kind() == NonlinearityKind::Power && spec.dim >= 2 && !nl.subcritical()) {
    SolveReport r;
    r.status = SolveStatus::Refused;
    r.max_degree = spec.max_degree;
    r.order = spec.quadrature_order();
    r.seed = seed;
    r.tolerances = spec.tolerances;
    r.power_identity_coefficient = spec.dim / nl.p() - 0.5 * (spec.dim - 1.0);
    std::ostringstream msg;
    msg << "refused: p = " << nl.p() << " >= 2* = " << critical_exponent(spec.dim)
        << "; nonexistence regime, the Pohozaev balance (N/p - (N-1)/2) int |u|^p = "
           "2 int int |x|^2 v^2 has a non-positive left coefficient, so no nontrivial solution exists";
    r.message = msg.str();
    return r;
  }
  const SpectralSpace space = make_space(spec.dim, spec.max_degree, spec.quadrature_order());
  SolveReport r = nehari_descent(space, nl, initial_seed(space.index_set(), seed), spec.tolerances,
                                 spec.max_iterations);
  r.seed = seed;
  finish_report(space, nl, r);
  return r;
}

SolveReport solve_critical_perturbed(const ProblemSpec& spec, std::uint64_t seed,
                                     std::optional<double> sobolev_estimate) {
  spec.validate();
  const Nonlinearity& nl = spec.nonlinearity;
  if (nl.kind() != NonlinearityKind::CriticalPlus)
    throw std::invalid_argument("solve_critical_perturbed needs a critical_plus nonlinearity");
  const SpectralSpace space = make_space(spec.dim, spec.max_degree, spec.quadrature_order());
  SolveReport r = nehari_descent(space, nl, initial_seed(space.index_set(), seed), spec.tolerances,
                                 spec.max_iterations);
  r.seed = seed;
  finish_report(space, nl, r);
  r.mp_level_estimate = r.energy_value;
  if (sobolev_estimate) r.level_bound = std::pow(*sobolev_estimate, spec.dim) / (2.0 * spec.dim);
  return r;
}

SpectralField solve_linear(const SpectralField& g) {
  SpectralField u(g.index_set);
  SpectralField grad = hermite_riesz_apply(g);
  grad.coeffs = u.coeffs - grad.coeffs;
  u.coeffs -= grad.coeffs;
  return u;
}

double weak_form_residual(const SpectralSpace& space, const SpectralField& u,
                          const Nonlinearity& nl, int count, std::uint64_t seed) {
  const Eigen::VectorXd v = space.from_coeffs(u);
  const Eigen::VectorXd f = nonlinear_values(space, v, nl, NonlinearTerm::Force);
  Rng rng(seed);
  double worst = 0.0;
  SpectralField phi(u.index_set);
  for (int c = 0; c < count; ++c) {
    for (Eigen::Index i = 0; i < phi.coeffs.size(); ++i) phi.coeffs[i] = rng.normal();
    const Eigen::VectorXd pv = space.from_coeffs(phi);
    const double lhs = inner_sqrtH(u, phi);
    const double rhs = space.integrate(f.cwiseProduct(pv));
    worst = std::max(worst, std::abs(lhs - rhs) / sqrtH_norm(phi));
  }
  return worst;
}

int FdGrid::x_points() const { return static_cast<int>(std::lround(2.0 * half_width / spacing)) + 1; }

int FdGrid::y_rows() const { return static_cast<int>(std::lround(height / spacing)); }

std::vector<double> FdGrid::x_nodes() const {
  std::vector<double> x(x_points());
  for (int i = 0; i < x_points(); ++i) x[i] = -half_width + i * spacing;
  return x;
}

FdResult fd_oracle_linear(std::span<const double> g, const FdGrid& grid, double tol,
                          int max_iterations) {
  if (!(grid.spacing > 0.0) || !(grid.half_width > 0.0) || !(grid.height > 0.0))
    throw std::invalid_argument("fd_oracle_linear: L, Y and h must be positive");
  const int nx = grid.x_points();
  const int m = nx - 2;
  const int rows = grid.y_rows();
  if (m < 1 || rows < 2) throw std::invalid_argument("fd_oracle_linear: grid too coarse");
  if (static_cast<int>(g.size()) != nx)
    throw std::invalid_argument("fd_oracle_linear: g must hold one value per x node");
  const double h = grid.spacing;

  FdResult out;
  out.x = grid.x_nodes();
  std::vector<double> x2(m);
  for (int i = 0; i < m; ++i) x2[i] = out.x[i + 1] * out.x[i + 1];

  using Mat = Eigen::MatrixXd;  // rows: y index, cols: interior x index
  Mat b = Mat::Zero(rows, m);
  for (int i = 0; i < m; ++i) b(0, i) = h * g[i + 1];

  auto apply = [&](const Mat& v) {
    Mat a(rows, m);
    for (int j = 0; j < rows; ++j) {
      const double dy = j == 0 ? 0.5 : 1.0;
      for (int i = 0; i < m; ++i) {
        double sx = (2.0 + h * h * x2[i]) * v(j, i);
        if (i > 0) sx -= v(j, i - 1);
        if (i + 1 < m) sx -= v(j, i + 1);
        double ty;
        if (j == 0) ty = v(0, i) - v(1, i);
        else {
          ty = 2.0 * v(j, i) - v(j - 1, i);
          if (j + 1 < rows) ty -= v(j + 1, i);
        }
        a(j, i) = ty + dy * sx;
      }
    }
    return a;
  };

  Eigen::VectorXd sx_diag(m), sx_sub(std::max(m - 1, 0));
  for (int i = 0; i < m; ++i) sx_diag[i] = 2.0 + h * h * x2[i];
  for (int i = 0; i + 1 < m; ++i) sx_sub[i] = -1.0;
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(sx_diag, sx_sub, Eigen::ComputeEigenvectors);
  const Mat q = es.eigenvectors();
  const Eigen::VectorXd mu = es.eigenvalues();

  auto precondition = [&](const Mat& r) {
    Mat w = r * q;
    std::vector<double> c(rows), d(rows);
    for (int k = 0; k < m; ++k) {
      // Thomas on (T_y + mu D_y): diagonal 1 + mu/2 then 2 + mu, off-diagonal -1
      auto diag = [&](int j) { return j == 0 ? 1.0 + 0.5 * mu[k] : 2.0 + mu[k]; };
      double denom = diag(0);
      c[0] = -1.0 / denom;
      d[0] = w(0, k) / denom;
      for (int j = 1; j < rows; ++j) {
        denom = diag(j) + c[j - 1];
        c[j] = -1.0 / denom;
        d[j] = (w(j, k) + d[j - 1]) / denom;
      }
      w(rows - 1, k) = d[rows - 1];
      for (int j = rows - 2; j >= 0; --j) w(j, k) = d[j] - c[j] * w(j + 1, k);
    }
    return Mat(w * q.transpose());
  };

  Mat x = Mat::Zero(rows, m);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    out.trace.assign(nx, 0.0);
    return out;
  }
  Mat r = b;
  Mat z = precondition(r);
  Mat p = z;
  double rz = (r.array() * z.array()).sum();
  int it = 0;
  double rel = 1.0;
  while (it < max_iterations) {
    const Mat ap = apply(p);
    const double alpha = rz / (p.array() * ap.array()).sum();
    x += alpha * p;
    r -= alpha * ap;
    ++it;
    rel = r.norm() / bnorm;
    if (rel < tol) break;
    z = precondition(r);
    const double rz_new = (r.array() * z.array()).sum();
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  out.iterations = it;
  out.relative_residual = rel;
  out.converged = rel < tol;
  out.trace.assign(nx, 0.0);
  for (int i = 0; i < m; ++i) out.trace[i + 1] = x(0, i);
  return out;
}

double participation_ratio(const SpectralField& u) {
  const double s2 = u.coeffs.squaredNorm();
  const double s4 = u.coeffs.array().square().square().sum();
  return s4 > 0.0 ? s2 * s2 / s4 : 0.0;
}

ProbeReport critical_nonattainment_probe(int dim, std::span<const int> degrees,
                                         const Tolerances& tol, int max_iterations) {
  if (dim < 2) throw std::invalid_argument("critical_nonattainment_probe needs N >= 2");
  ProbeReport report;
  report.dim = dim;
  report.rows.resize(degrees.size());
  const double crit = critical_exponent(dim);
  const Nonlinearity nl = Nonlinearity::power(crit, dim);
  parallel_for(degrees.size(), [&](std::size_t i) {
    const int K = degrees[i];
    const SpectralSpace space = make_space(dim, K, default_order(K));
    const SolveReport s =
        nehari_descent(space, nl, initial_seed(space.index_set(), 0), tol, max_iterations);
    const EnergyBreakdown e = extension_energy(space, s.field);
    const double trace_norm2 = std::pow(lp_integral(space, space.from_coeffs(s.field), crit), 2.0 / crit);
    ProbeRow row;
    row.max_degree = K;
    row.lambda_quotient = e.total() / trace_norm2;
    row.sobolev_quotient = e.gradient() / trace_norm2;
    row.potential_share = e.potential / e.total();
    row.participation = participation_ratio(s.field);
    row.iterations = s.iterations;
    row.status = s.status;
    report.rows[i] = row;
  });
  report.quotient_strictly_decreasing = true;
  report.potential_share_decreasing = true;
  report.participation_increasing = true;
  report.all_converged = true;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    report.all_converged = report.all_converged && report.rows[i].status == SolveStatus::Converged;
    if (i == 0) continue;
    const ProbeRow& a = report.rows[i - 1];
    const ProbeRow& b = report.rows[i];
    report.quotient_strictly_decreasing = report.quotient_strictly_decreasing && b.lambda_quotient < a.lambda_quotient;
    report.potential_share_decreasing = report.potential_share_decreasing && b.potential_share < a.potential_share;
    report.participation_increasing = report.participation_increasing && b.participation > a.participation;
  }
  return report;
}

}  // namespace oschalf

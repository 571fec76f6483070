#include "oschalf/extension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oschalf/oscillator.hpp"

namespace oschalf {

namespace {

// sum over axes and bands of M(k_i, k_i + d) u_f u_g / (s_f + s_g), where
// M has diagonal k + 1/2 and +-2 band sign * sqrt((k+1)(k+2))/2.
double banded_form(const SpectralField& u, const Eigen::VectorXd& sqrt_lam, double band_sign) {
  const BasisIndexSet& set = u.index_set;
  const int K = set.max_degree();
  const int n = set.dim();
  std::vector<std::size_t> stride(n);
  std::size_t st = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[i] = st;
    st *= static_cast<std::size_t>(K + 1);
  }
  double total = 0.0;
  for (std::size_t f = 0; f < set.size(); ++f) {
    const double uf = u.coeffs[static_cast<Eigen::Index>(f)];
    if (uf == 0.0) continue;
    const double sf = sqrt_lam[static_cast<Eigen::Index>(f)];
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>((f / stride[i]) % (K + 1));
      total += (k + 0.5) * uf * uf / (2.0 * sf);
      if (k + 2 <= K) {
        const std::size_t g = f + 2 * stride[i];
        const double off = band_sign * 0.5 * std::sqrt((k + 1.0) * (k + 2.0));
        // both (k, k+2) and (k+2, k) entries
        total += 2.0 * off * uf * u.coeffs[static_cast<Eigen::Index>(g)] /
                 (sf + sqrt_lam[static_cast<Eigen::Index>(g)]);
      }
    }
  }
  return total;
}

}  // namespace

SpectralField poisson_extend(const SpectralField& trace, double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("poisson_extend: y must be >= 0");
  const Eigen::VectorXd lam = eigenvalues(trace.index_set);
  SpectralField out(trace.index_set);
  out.coeffs = trace.coeffs.array() * (-lam.array().sqrt() * y).exp();
  return out;
}

EnergyBreakdown extension_energy(const SpectralSpace& space, const SpectralField& trace,
                                 const Nonlinearity* nl) {
  space.check_field(trace);
  const Eigen::VectorXd sl = eigenvalues(trace.index_set).array().sqrt();
  EnergyBreakdown e;
  e.grad_y = 0.5 * (sl.array() * trace.coeffs.array().square()).sum();
  e.grad_x = banded_form(trace, sl, -1.0);
  e.potential = banded_form(trace, sl, 1.0);
  if (nl != nullptr) {
    const Eigen::VectorXd v = space.from_coeffs(trace);
    e.boundary_F = space.integrate(nonlinear_values(space, v, *nl, NonlinearTerm::Primitive));
    e.boundary_xF = space.integrate(nonlinear_values(space, v, *nl, NonlinearTerm::XGradPrimitive));
  }
  return e;
}

bool truncation_tainted(const SpectralField& field, double threshold) {
  const BasisIndexSet& set = field.index_set;
  const int K = set.max_degree();
  for (std::size_t f = 0; f < set.size(); ++f)
    if (set.max_axis_degree(f) >= K - 1 &&
        std::abs(field.coeffs[static_cast<Eigen::Index>(f)]) >= threshold)
      return true;
  return false;
}

PohozaevTerms pohozaev_terms(const SpectralSpace& space, const SpectralField& trace,
                             const Nonlinearity& nl) {
  const EnergyBreakdown e = extension_energy(space, trace, &nl);
  const double n = space.dim();
  PohozaevTerms t;
  t.gradient_term = 0.5 * (n - 1.0) * e.gradient();
  t.potential_term = 0.5 * (n + 3.0) * e.potential;
  t.source_term = n * e.boundary_F;
  t.weighted_source_term = e.boundary_xF;
  const double scale = std::max({std::abs(t.gradient_term), std::abs(t.potential_term),
                                 std::abs(t.source_term), std::abs(t.weighted_source_term)});
  const double balance = t.gradient_term + t.potential_term - t.source_term - t.weighted_source_term;
  t.residual = scale > 0.0 ? std::abs(balance) / scale : 0.0;
  t.truncation_tainted = truncation_tainted(trace);
  return t;
}

double pohozaev_residual(const SpectralSpace& space, const SpectralField& trace,
                         const Nonlinearity& nl) {
  return pohozaev_terms(space, trace, nl).residual;
}

PowerIdentity power_identity_residual(const SpectralSpace& space, const SpectralField& trace,
                                      double p) {
  if (!(p > 2.0)) throw std::invalid_argument("power_identity_residual: p must be > 2");
  const EnergyBreakdown e = extension_energy(space, trace);
  const double n = space.dim();
  PowerIdentity r;
  r.coefficient = n / p - 0.5 * (n - 1.0);
  r.lhs = r.coefficient * lp_integral(space, space.from_coeffs(trace), p);
  r.rhs = 2.0 * e.potential;
  r.nonexistence_regime = r.coefficient <= 0.0;
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.residual = scale > 0.0 ? std::abs(r.lhs - r.rhs) / scale : 0.0;
  return r;
}

}  // namespace oschalf

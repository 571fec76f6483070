#pragma once

#include "oschalf/hermite.hpp"
#include "oschalf/variational.hpp"

namespace oschalf {

/// Half-space energy of the Poisson lift of a trace, plus the boundary
/// integrals of F and x . F_x on the trace.
struct EnergyBreakdown {
  double grad_y = 0.0;
  double grad_x = 0.0;
  double potential = 0.0;
  double boundary_F = 0.0;
  double boundary_xF = 0.0;

  double total() const { return grad_y + grad_x + potential; }
  double gradient() const { return grad_y + grad_x; }
};

/// x-coefficients of v(., y) = sum_k u_k exp(-sqrt(lambda_k) y) h_k.
SpectralField poisson_extend(const SpectralField& trace, double y);

/// Closed forms: grad_y = 1/2 sum sqrt(lambda) u^2, grad_x and potential as
/// sum_{k,k'} M_{kk'} u_k u_k' / (sqrt(lambda_k) + sqrt(lambda_k')) with M
/// the per-axis ladder stencils. Boundary terms are zero when `nl` is null.
EnergyBreakdown extension_energy(const SpectralSpace& space, const SpectralField& trace,
                                 const Nonlinearity* nl = nullptr);

/// True when some coefficient on the two outermost per-axis degree shells
/// has magnitude >= threshold.
bool truncation_tainted(const SpectralField& field, double threshold = 1e-10);

/// The four terms (N-1)/2 (grad_y + grad_x), (N+3)/2 potential, N int F and
/// int x . F_x, and the relative residual of their balance.
struct PohozaevTerms {
  double gradient_term = 0.0;
  double potential_term = 0.0;
  double source_term = 0.0;
  double weighted_source_term = 0.0;
  double residual = 0.0;
  bool truncation_tainted = false;
};

PohozaevTerms pohozaev_terms(const SpectralSpace& space, const SpectralField& trace,
                             const Nonlinearity& nl);
double pohozaev_residual(const SpectralSpace& space, const SpectralField& trace,
                         const Nonlinearity& nl);

/// (N/p - (N-1)/2) int |u|^p = 2 int int |x|^2 v^2.
struct PowerIdentity {
  double coefficient = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  /// coefficient <= 0: no nonzero solution can satisfy the identity.
  bool nonexistence_regime = false;
};

PowerIdentity power_identity_residual(const SpectralSpace& space, const SpectralField& trace,
                                      double p);

}  // namespace oschalf

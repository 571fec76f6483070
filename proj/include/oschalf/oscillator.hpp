#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "oschalf/hermite.hpp"

namespace oschalf {

/// lambda_k = 2|k| + N for every flat index of the set.
Eigen::VectorXd eigenvalues(const BasisIndexSet& set);

/// Matrix elements of x, x^2 and -d^2/dx^2 in the 1D basis h_0..h_K.
struct LadderMatrices {
  Eigen::MatrixXd X;  // <x h_j, h_i>
  Eigen::MatrixXd B;  // <x^2 h_j, h_i>
  Eigen::MatrixXd A;  // <h_j', h_i'>
};

/// Exact compressed elements: B_kk = k + 1/2, B_{k,k+2} = sqrt((k+1)(k+2))/2,
/// A = diag(2k+1) - B.
LadderMatrices ladder_matrices(int max_degree);

/// Coefficientwise lambda_k^s.
SpectralField apply_fractional(const SpectralField& field, double s);

/// sum_k sqrt(lambda_k) a_k b_k.
double inner_sqrtH(const SpectralField& a, const SpectralField& b);
double quadratic_form_sqrtH(const SpectralField& field);

/// H^{-1/2}.
SpectralField hermite_riesz_apply(const SpectralField& g);

/// Radius inside which a degree-K expansion is trusted pointwise.
inline double trust_radius(int max_degree) { return 0.8 * std::sqrt(2.0 * max_degree + 1.0); }

/// sup over grid nodes with |x| <= trust radius of |x| |(H^{-1/2} g)(x)|.
double weighted_sup_report(const SpectralSpace& space, const SpectralField& g);

/// Dense <H h_j, h_i> assembled by quadrature of h_i' h_j' + x^2 h_i h_j.
/// Throws CapacityError when (K+1)^N > 4096.
Eigen::MatrixXd assemble_H_matrix(int max_degree, int dim);

inline constexpr std::size_t kDenseCapacity = 4096;

}  // namespace oschalf

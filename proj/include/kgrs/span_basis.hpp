#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "kgrs/krein.hpp"

namespace kgrs {

// M(i,j) = <b_j, a_i>, so that for f = sum_j c_j b_j and g = sum_i d_i a_i
// (coefficient columns c, d) the pairing is inner(f, g) = d^adjoint * M * c.
Eigen::MatrixXcd pairing_matrix(std::span<const GridFunction> a, std::span<const GridFunction> b);

GridFunction linear_combination(std::span<const GridFunction> basis,
                                std::span<const Complex> coeffs);

// Orthonormalized coordinates for span{phi_n}, from the eigendecomposition of
// the phi Gram matrix. Column k of `transform` holds the phi-coefficients of
// the k-th orthonormal vector b_k; `phi_coords` is its inverse (column n = the
// b-coordinates of phi_n).
struct SpanBasis {
  Eigen::MatrixXcd transform;    // W = U diag(lambda^{-1/2})
  Eigen::MatrixXcd phi_coords;   // W^{-1} = diag(lambda^{1/2}) U^adjoint
  Eigen::VectorXd gram_eigenvalues;
  double condition = 0.0;
  std::vector<GridFunction> onb;  // b_k as grid functions
};

// Throws RankDeficientSpan if the Gram matrix has a non-positive eigenvalue
// or its condition number exceeds cond_limit.
SpanBasis orthonormalize_span(const BiorthogonalSystem& system, double cond_limit = 1e10);

}  // namespace kgrs

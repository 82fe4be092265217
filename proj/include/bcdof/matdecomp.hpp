// SPDX-License-Identifier: Apache-2.0
//
// Small dense decompositions used to bring a pair of MIMO channel matrices
// into generalized-singular-value form.
#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace bcdof {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace matdecomp {

inline constexpr double kDefaultRankTol = 1e-9;

struct QrFactors {
  Matrix q; ///< m x m orthonormal
  Matrix r; ///< m x n upper triangular
};

struct SvdFactors {
  Matrix u;      ///< m x m orthonormal
  Vector values; ///< min(m, n) values, nonincreasing, >= 0
  Matrix v;      ///< n x n orthonormal
};

/// Householder QR. Always succeeds for finite input.
QrFactors qr(const Matrix& m);

/// One-sided Jacobi SVD with full U and V.
/// Throws NumericalFailure if the sweep cap is reached.
SvdFactors svd(const Matrix& m);

/// Number of singular values above tol * sigma_max * max(rows, cols).
std::size_t numerical_rank(const Matrix& m, double tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of Null(m).
Matrix nullspace_basis(const Matrix& m, double tol = kDefaultRankTol);

/// Columns completing the orthonormal columns of `q` to a square orthonormal matrix.
Matrix orthonormal_completion(const Matrix& q);

/// Inverse of a non-singular lower-triangular matrix by forward substitution.
Matrix lower_triangular_inverse(const Matrix& l);

/// Factors of H_j = psi_j * sigma_j * [omega^{-1} 0] * psi0^T, j = 1, 2.
///
/// sigma1 = [I_{k-p-s}; D1; 0] and sigma2 = [0; D2; I_p] with D1, D2 diagonal and
/// strictly positive. Within the s-block the ratio D1/D2 is nonincreasing.
struct GsvdFactors {
  Matrix psi1;      ///< r1 x r1
  Matrix psi2;      ///< r2 x r2
  Matrix psi0;      ///< t x t
  Matrix omega;     ///< k x k, lower triangular
  Matrix omega_inv; ///< k x k, lower triangular, positive diagonal
  Matrix sigma1;    ///< r1 x k
  Matrix sigma2;    ///< r2 x k
  std::size_t k = 0;
  std::size_t p = 0;
  std::size_t s = 0;

  std::size_t only_first() const { return k - p - s; }
  std::size_t shared() const { return s; }
  std::size_t only_second() const { return p; }
};

struct GsvdResiduals {
  double reconstruction1 = 0; ///< ||psi1^T H1 psi0 - sigma1 [omega^-1 0]||_F
  double reconstruction2 = 0;
  double orthonormality1 = 0; ///< ||psi1^T psi1 - I||_F
  double orthonormality2 = 0;
  double orthonormality0 = 0;
  double pattern = 0;      ///< largest |entry| outside the prescribed sigma blocks
  double min_diagonal = 0; ///< smallest D1/D2 entry (+inf when s = 0)
};

/// Generalized SVD of (h1, h2) via QR of the stacked matrix and a CS decomposition.
/// Throws ContractViolation when column counts differ and NumericalFailure when the
/// constructed factors miss the residual bounds (1e-8 relative, 1e-10 orthonormality).
GsvdFactors gsvd(const Matrix& h1, const Matrix& h2, double tol = kDefaultRankTol);

GsvdResiduals gsvd_residuals(const Matrix& h1, const Matrix& h2, const GsvdFactors& f);

/// [omega^{-1}  0_{k x (t-k)}]
Matrix omega_inv_block(const GsvdFactors& f);

} // namespace matdecomp
} // namespace bcdof

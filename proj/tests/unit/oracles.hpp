// SPDX-License-Identifier: Apache-2.0
//
// Reference computations built on Eigen's own decompositions, independent of
// the in-house QR/SVD under test.
#pragma once

#include "bcdof/matdecomp.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cstddef>

namespace bcdof::oracle {

inline std::size_t rank(const Matrix& m, double tol = 1e-9) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tol * sv(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  return static_cast<std::size_t>((sv.array() > cut).count());
}

inline Matrix stack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

/// Orthonormal basis of Null(m) from Eigen's full SVD.
inline Matrix null_basis(const Matrix& m, double tol = 1e-9) {
  const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const std::size_t r = rank(m, tol);
  return svd.matrixV().rightCols(m.cols() - static_cast<Eigen::Index>(r));
}

/// Orthonormal basis of the row space of m.
inline Matrix row_space(const Matrix& m, double tol = 1e-9) {
  const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().leftCols(static_cast<Eigen::Index>(rank(m, tol)));
}

/// dim(A ∩ B) for subspaces given by orthonormal bases.
inline std::size_t intersection_dim(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0 || b.cols() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(a.transpose() * b);
  return static_cast<std::size_t>((svd.singularValues().array() > 1.0 - 1e-8).count());
}

/// Dimension of the block seen only by the second receiver:
/// Null(H1) ∩ rowspace([H1; H2]).
inline std::size_t second_only(const Matrix& h1, const Matrix& h2) {
  return intersection_dim(null_basis(h1), row_space(stack(h1, h2)));
}

} // namespace bcdof::oracle

// SPDX-License-Identifier: Apache-2.0
#include "bcdof/matdecomp.hpp"

#include "bcdof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace bcdof::matdecomp {

namespace {

using Index = Eigen::Index;

constexpr int kMaxJacobiSweeps = 100;
constexpr double kEps = std::numeric_limits<double>::epsilon();

double frobenius_identity_gap(const Matrix& q) {
  if (q.size() == 0) return 0.0;
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

} // namespace

QrFactors qr(const Matrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  Matrix r = m;
  Matrix q = Matrix::Identity(rows, rows);

  const Index steps = std::min(rows - 1, cols);
  for (Index j = 0; j < steps; ++j) {
    const Index len = rows - j;
    Vector v = r.col(j).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const double alpha = v(0) > 0 ? -norm : norm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    r.bottomRows(len) -= 2.0 * v * (v.transpose() * r.bottomRows(len));
    q.rightCols(len) -= 2.0 * (q.rightCols(len) * v) * v.transpose();
    r.col(j).tail(len - 1).setZero();
    r(j, j) = alpha;
  }

  // Nonnegative diagonal; makes Q unique for full-rank input.
  const Index diag = std::min(rows, cols);
  for (Index i = 0; i < diag; ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  return {std::move(q), std::move(r)};
}

SvdFactors svd(const Matrix& m) {
  if (m.rows() < m.cols()) {
    SvdFactors t = svd(m.transpose());
    return {std::move(t.v), std::move(t.values), std::move(t.u)};
  }
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (cols == 0) return {Matrix::Identity(rows, rows), Vector(0), Matrix(0, 0)};

  Matrix a = m;
  Matrix v = Matrix::Identity(cols, cols);
  // Columns at roundoff level of the whole matrix are left alone; rotating them
  // against each other never settles.
  const double negligible = kEps * kEps * m.squaredNorm();

  bool converged = false;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i + 1 < cols; ++i) {
      for (Index j = i + 1; j < cols; ++j) {
        const double alpha = a.col(i).squaredNorm();
        const double beta = a.col(j).squaredNorm();
        const double gamma = a.col(i).dot(a.col(j));
        if (alpha <= negligible || beta <= negligible) continue;
        if (std::abs(gamma) <= kEps * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (Matrix* target : {&a, &v}) {
          Vector ci = target->col(i);
          Vector cj = target->col(j);
          target->col(i) = c * ci - s * cj;
          target->col(j) = s * ci + c * cj;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw NumericalFailure("svd: one-sided Jacobi did not converge within " +
                           std::to_string(kMaxJacobiSweeps) + " sweeps");
  }

  Vector norms(cols);
  for (Index i = 0; i < cols; ++i) norms(i) = a.col(i).norm();
  std::vector<Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return norms(x) > norms(y); });

  SvdFactors out;
  out.values.resize(cols);
  out.v.resize(cols, cols);
  for (Index i = 0; i < cols; ++i) {
    out.values(i) = norms(order[static_cast<std::size_t>(i)]);
    out.v.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }

  // Columns whose norm is negligible carry no direction; complete them instead.
  Index kept = 0;
  while (kept < cols && out.values(kept) * out.values(kept) > negligible && out.values(kept) > 0.0) ++kept;
  Matrix u1(rows, kept);
  for (Index i = 0; i < kept; ++i) {
    u1.col(i) = a.col(order[static_cast<std::size_t>(i)]) / out.values(i);
  }
  out.u.resize(rows, rows);
  out.u.leftCols(kept) = u1;
  out.u.rightCols(rows - kept) = orthonormal_completion(u1);
  return out;
}

std::size_t numerical_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  const Vector values = svd(m).values;
  if (values.size() == 0 || values(0) == 0.0) return 0;
  const double threshold =
      tol * values(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  return static_cast<std::size_t>((values.array() > threshold).count());
}

Matrix nullspace_basis(const Matrix& m, double tol) {
  const auto rank = static_cast<Index>(numerical_rank(m, tol));
  const SvdFactors f = svd(m);
  return f.v.rightCols(m.cols() - rank);
}

Matrix orthonormal_completion(const Matrix& q) {
  const Index rows = q.rows();
  if (q.cols() == 0) return Matrix::Identity(rows, rows);
  return qr(q).q.rightCols(rows - q.cols());
}

Matrix lower_triangular_inverse(const Matrix& l) {
  const Index n = l.rows();
  Matrix inv = Matrix::Zero(n, n);
  for (Index col = 0; col < n; ++col) {
    for (Index i = col; i < n; ++i) {
      double acc = (i == col) ? 1.0 : 0.0;
      for (Index j = col; j < i; ++j) acc -= l(i, j) * inv(j, col);
      if (l(i, i) == 0.0) throw NumericalFailure("lower_triangular_inverse: singular diagonal");
      inv(i, col) = acc / l(i, i);
    }
  }
  return inv;
}

Matrix omega_inv_block(const GsvdFactors& f) {
  const Index k = static_cast<Index>(f.k);
  Matrix block = Matrix::Zero(k, f.psi0.cols());
  block.leftCols(k) = f.omega_inv;
  return block;
}

GsvdFactors gsvd(const Matrix& h1, const Matrix& h2, double tol) {
  if (h1.cols() != h2.cols()) {
    throw ContractViolation("gsvd: column counts differ (" + std::to_string(h1.cols()) +
                            " vs " + std::to_string(h2.cols()) + ")");
  }
  if (!(tol > 0)) throw ContractViolation("gsvd: tolerance must be positive");
  if (!h1.allFinite() || !h2.allFinite()) throw ContractViolation("gsvd: non-finite entry");

  const Index r1 = h1.rows();
  const Index r2 = h2.rows();
  const Index t = h1.cols();

  Matrix stacked(r1 + r2, t);
  stacked << h1, h2;

  // Row space of the stacked channel first, null space last.
  const SvdFactors stacked_svd = svd(stacked);
  Index k = 0;
  if (stacked_svd.values.size() > 0 && stacked_svd.values(0) > 0) {
    const double threshold =
        tol * stacked_svd.values(0) * static_cast<double>(std::max(r1 + r2, t));
    k = (stacked_svd.values.array() > threshold).count();
  }

  GsvdFactors f;
  f.k = static_cast<std::size_t>(k);
  if (k == 0) {
    f.psi1 = Matrix::Identity(r1, r1);
    f.psi2 = Matrix::Identity(r2, r2);
    f.psi0 = Matrix::Identity(t, t);
    f.omega = Matrix(0, 0);
    f.omega_inv = Matrix(0, 0);
    f.sigma1 = Matrix(r1, 0);
    f.sigma2 = Matrix(r2, 0);
    return f;
  }

  const Matrix& basis = stacked_svd.v;
  const QrFactors stacked_qr = qr(stacked * basis.leftCols(k));
  const Matrix q = stacked_qr.q.leftCols(k);
  const Matrix r = stacked_qr.r.topRows(k);
  const Matrix q1 = q.topRows(r1);
  const Matrix q2 = q.bottomRows(r2);

  // CS decomposition: q1 = psi1 * C * W^T, q2 * W has orthogonal columns of norm sqrt(1 - c^2).
  const SvdFactors cs = svd(q1);
  const Matrix& w = cs.v;
  Vector cosines = Vector::Zero(k);
  cosines.head(cs.values.size()) = cs.values;
  const Matrix q2w = q2 * w;
  Vector sines(k);
  for (Index i = 0; i < k; ++i) sines(i) = q2w.col(i).norm();

  const double cs_threshold = tol * static_cast<double>(std::max(r1 + r2, t));
  Index n_first = 0;
  while (n_first < k && sines(n_first) <= cs_threshold) ++n_first;
  Index n_second = 0;
  while (n_second < k - n_first && cosines(k - 1 - n_second) <= cs_threshold) ++n_second;
  const Index n_shared = k - n_first - n_second;
  if (k - n_second > r1 || n_second + n_shared > r2) {
    throw NumericalFailure("gsvd: CS block sizes inconsistent with receiver dimensions");
  }
  f.p = static_cast<std::size_t>(n_second);
  f.s = static_cast<std::size_t>(n_shared);

  f.psi1 = cs.u;
  f.sigma1 = Matrix::Zero(r1, k);
  for (Index i = 0; i < n_first; ++i) f.sigma1(i, i) = 1.0;
  for (Index i = n_first; i < n_first + n_shared; ++i) f.sigma1(i, i) = cosines(i);

  const Index seen2 = n_shared + n_second;
  const QrFactors tail_qr = qr(q2w.rightCols(seen2));
  f.psi2.resize(r2, r2);
  f.psi2.leftCols(r2 - seen2) = tail_qr.q.rightCols(r2 - seen2);
  f.psi2.rightCols(seen2) = tail_qr.q.leftCols(seen2);
  f.sigma2 = Matrix::Zero(r2, k);
  for (Index j = 0; j < seen2; ++j) {
    const Index col = n_first + j;
    f.sigma2(r2 - k + col, col) = j < n_shared ? tail_qr.r(j, j) : 1.0;
  }

  // W^T R = L Z^T with L lower triangular; Z is absorbed into psi0.
  const QrFactors lq = qr((w.transpose() * r).transpose());
  f.omega_inv = lq.r.transpose();
  f.omega = lower_triangular_inverse(f.omega_inv);
  f.psi0 = basis;
  f.psi0.leftCols(k) = basis.leftCols(k) * lq.q;

  const GsvdResiduals res = gsvd_residuals(h1, h2, f);
  const double bound1 = 1e-8 * (1.0 + h1.norm());
  const double bound2 = 1e-8 * (1.0 + h2.norm());
  if (res.reconstruction1 > bound1 || res.reconstruction2 > bound2) {
    throw NumericalFailure("gsvd: reconstruction residual " +
                           std::to_string(std::max(res.reconstruction1, res.reconstruction2)) +
                           " exceeds bound");
  }
  if (std::max({res.orthonormality0, res.orthonormality1, res.orthonormality2}) > 1e-10) {
    throw NumericalFailure("gsvd: orthonormality residual exceeds 1e-10");
  }
  return f;
}

GsvdResiduals gsvd_residuals(const Matrix& h1, const Matrix& h2, const GsvdFactors& f) {
  GsvdResiduals res;
  const Matrix block = omega_inv_block(f);
  res.reconstruction1 = (f.psi1.transpose() * h1 * f.psi0 - f.sigma1 * block).norm();
  res.reconstruction2 = (f.psi2.transpose() * h2 * f.psi0 - f.sigma2 * block).norm();
  res.orthonormality1 = frobenius_identity_gap(f.psi1);
  res.orthonormality2 = frobenius_identity_gap(f.psi2);
  res.orthonormality0 = frobenius_identity_gap(f.psi0);

  const auto k = static_cast<Index>(f.k);
  const auto first = static_cast<Index>(f.only_first());
  const auto shared = static_cast<Index>(f.s);
  const Index r2 = f.sigma2.rows();
  double pattern = 0.0;
  double min_diag = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < f.sigma1.rows(); ++i) {
    for (Index j = 0; j < k; ++j) {
      const double x = f.sigma1(i, j);
      if (i == j && j < first) {
        pattern = std::max(pattern, std::abs(x - 1.0));
      } else if (i == j && j < first + shared) {
        min_diag = std::min(min_diag, x);
      } else {
        pattern = std::max(pattern, std::abs(x));
      }
    }
  }
  for (Index i = 0; i < r2; ++i) {
    for (Index j = 0; j < k; ++j) {
      const double x = f.sigma2(i, j);
      const bool on_diag = (i == r2 - k + j) && j >= first;
      if (on_diag && j >= first + shared) {
        pattern = std::max(pattern, std::abs(x - 1.0));
      } else if (on_diag) {
        min_diag = std::min(min_diag, x);
      } else {
        pattern = std::max(pattern, std::abs(x));
      }
    }
  }
  res.pattern = pattern;
  res.min_diagonal = min_diag;
  return res;
}

} // namespace bcdof::matdecomp

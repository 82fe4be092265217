// SPDX-License-Identifier: Apache-2.0
#include "bcdof/lp.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace bcdof::lp {

namespace {

// Dense tableau in the dictionary layout: rows 0..m-1 constraints, row m the
// objective, row m+1 the phase-one objective; column n is the artificial
// variable (id -1) and column n+1 the right-hand side.
class Tableau {
public:
  Tableau(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
          const std::vector<Rational>& c)
      : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
        basic_(static_cast<std::size_t>(m_)), nonbasic_(static_cast<std::size_t>(n_ + 1)),
        d_(static_cast<std::size_t>(m_ + 2), std::vector<Rational>(static_cast<std::size_t>(n_ + 2))) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) at(i, j) = a[idx(i)][idx(j)];
      basic_[idx(i)] = n_ + i;
      at(i, n_) = -1;
      at(i, n_ + 1) = b[idx(i)];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[idx(j)] = j;
      at(m_, j) = -c[idx(j)];
    }
    nonbasic_[idx(n_)] = -1;
    at(m_ + 1, n_) = 1;
  }

  Result solve() {
    Result out;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (at(i, n_ + 1) < at(r, n_ + 1)) r = i;
    }
    if (m_ > 0 && at(r, n_ + 1) < 0) {
      pivot(r, n_);
      if (!run(1) || at(m_ + 1, n_ + 1) < 0) {
        out.status = Status::infeasible;
        return out;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[idx(i)] != -1) continue;
        for (int j = 0; j <= n_; ++j) {
          if (sgn(at(i, j)) != 0) {
            pivot(i, j);
            break;
          }
        }
      }
    }
    if (!run(2)) {
      out.status = Status::unbounded;
      return out;
    }
    out.status = Status::optimal;
    out.value = at(m_, n_ + 1);
    out.point.assign(static_cast<std::size_t>(n_), Rational(0));
    for (int i = 0; i < m_; ++i) {
      if (basic_[idx(i)] >= 0 && basic_[idx(i)] < n_) {
        out.point[idx(basic_[idx(i)])] = at(i, n_ + 1);
      }
    }
    return out;
  }

private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  Rational& at(int i, int j) { return d_[idx(i)][idx(j)]; }

  void pivot(int r, int s) {
    const Rational inv = 1 / at(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || sgn(at(i, s)) == 0) continue;
      const Rational factor = at(i, s) * inv;
      for (int j = 0; j < n_ + 2; ++j) {
        if (j != s && sgn(at(r, j)) != 0) at(i, j) -= at(r, j) * factor;
      }
    }
    for (int j = 0; j < n_ + 2; ++j) {
      if (j != s) at(r, j) *= inv;
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) at(i, s) *= -inv;
    }
    at(r, s) = inv;
    std::swap(basic_[idx(r)], nonbasic_[idx(s)]);
  }

  // Bland's rule: smallest-id improving column, smallest-id leaving row among ratio ties.
  bool run(int phase) {
    const int obj = phase == 1 ? m_ + 1 : m_;
    while (true) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (phase == 2 && nonbasic_[idx(j)] == -1) continue;
        if (sgn(at(obj, j)) >= 0) continue;
        if (s == -1 || nonbasic_[idx(j)] < nonbasic_[idx(s)]) s = j;
      }
      if (s == -1) return true;
      int r = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (sgn(at(i, s)) <= 0) continue;
        Rational ratio = at(i, n_ + 1) / at(i, s);
        if (r == -1 || ratio < best || (ratio == best && basic_[idx(i)] < basic_[idx(r)])) {
          r = i;
          best = std::move(ratio);
        }
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_;
  int n_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
  std::vector<std::vector<Rational>> d_;
};

} // namespace

Result maximize(const std::vector<Rational>& c, const std::vector<std::vector<Rational>>& rows,
                const std::vector<Rational>& rhs) {
  if (rows.size() != rhs.size()) throw std::invalid_argument("lp::maximize: row/rhs count mismatch");
  const std::size_t dim = c.size();
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::invalid_argument("lp::maximize: row length mismatch");
  }
  // x = x_plus - x_minus, both nonnegative.
  std::vector<std::vector<Rational>> split(rows.size(), std::vector<Rational>(2 * dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      split[i][j] = rows[i][j];
      split[i][dim + j] = -rows[i][j];
    }
  }
  std::vector<Rational> cost(2 * dim);
  for (std::size_t j = 0; j < dim; ++j) {
    cost[j] = c[j];
    cost[dim + j] = -c[j];
  }
  Result raw = Tableau(split, rhs, cost).solve();
  if (raw.status != Status::optimal) return raw;
  Result out;
  out.status = Status::optimal;
  out.value = raw.value;
  out.point.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) out.point[j] = raw.point[j] - raw.point[dim + j];
  return out;
}

bool feasible(std::size_t dim, const std::vector<std::vector<Rational>>& rows,
              const std::vector<Rational>& rhs) {
  return maximize(std::vector<Rational>(dim), rows, rhs).status != Status::infeasible;
}

} // namespace bcdof::lp
